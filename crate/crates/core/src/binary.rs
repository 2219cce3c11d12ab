//! Dense homogeneous forms in two variables `s, t`.
//!
//! A form of degree `d >= 0` stores `d + 1` coefficients, the coefficient of
//! `s^(d-i) t^i` at index `i`.  The zero form is encoded with degree `-1` and
//! an empty coefficient vector, so every stored form of degree `>= 0` has at
//! least one nonzero coefficient (leading or trailing coefficients may still
//! vanish; roots are never normalized away).

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::point::ProjectivePoint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm<K: Field> {
    field: K,
    degree: i64,
    coeffs: Vec<K::Elem>,
}

impl<K: Field> BinaryForm<K> {
    /// Normalizing constructor: an all-zero coefficient vector collapses to
    /// the zero form of degree −1.
    pub fn from_coeffs(field: K, coeffs: Vec<K::Elem>) -> Self {
        if coeffs.iter().all(|c| field.is_zero(c)) {
            return Self::zero(field);
        }
        BinaryForm {
            field,
            degree: coeffs.len() as i64 - 1,
            coeffs,
        }
    }

    pub fn zero(field: K) -> Self {
        BinaryForm {
            field,
            degree: -1,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: K, c: K::Elem) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn one(field: K) -> Self {
        Self::constant(field, field.one())
    }

    /// The monomial `s^(d-i) t^i`.
    pub fn monomial(field: K, degree: u32, i: u32) -> Self {
        assert!(i <= degree, "monomial index out of range");
        let mut coeffs = vec![field.zero(); degree as usize + 1];
        coeffs[i as usize] = field.one();
        BinaryForm {
            field,
            degree: degree as i64,
            coeffs,
        }
    }

    pub fn var_s(field: K) -> Self {
        Self::monomial(field, 1, 0)
    }

    pub fn var_t(field: K) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.degree < 0
    }

    pub fn coeffs(&self) -> &[K::Elem] {
        &self.coeffs
    }

    /// Coefficient of `s^(d-i) t^i`, zero when out of range.
    pub fn coeff(&self, i: usize) -> K::Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.degree, other.degree,
            "sum of homogeneous forms of different degrees"
        );
        let k = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| k.add(a, b))
            .collect();
        Self::from_coeffs(k, coeffs)
    }

    pub fn neg(&self) -> Self {
        let k = self.field;
        BinaryForm {
            field: k,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| k.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let k = self.field;
        if k.is_zero(c) || self.is_zero() {
            return Self::zero(k);
        }
        Self::from_coeffs(k, self.coeffs.iter().map(|a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(k);
        }
        let d = (self.degree + other.degree) as usize;
        let mut coeffs = vec![k.zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                k.mul_add(&mut coeffs[i + j], a, b);
            }
        }
        // A product of nonzero forms over a field is nonzero.
        BinaryForm {
            field: k,
            degree: d as i64,
            coeffs,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, s: &K::Elem, t: &K::Elem) -> K::Elem {
        let k = self.field;
        if self.is_zero() {
            return k.zero();
        }
        let mut acc = k.zero();
        let mut s_pow = vec![k.one()];
        let mut t_pow = vec![k.one()];
        for i in 1..=self.degree as usize {
            s_pow.push(k.mul(&s_pow[i - 1], s));
            t_pow.push(k.mul(&t_pow[i - 1], t));
        }
        let d = self.degree as usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            if k.is_zero(c) {
                continue;
            }
            acc = k.add(&acc, &k.mul(c, &k.mul(&s_pow[d - i], &t_pow[i])));
        }
        acc
    }

    pub fn eval_point(&self, p: &ProjectivePoint<K>) -> K::Elem {
        assert_eq!(p.coords().len(), 2, "binary form needs a point on the line");
        self.eval(&p.coords()[0], &p.coords()[1])
    }

    /// Partial derivative in `s`; exponents are multiplied inside the field,
    /// so characteristic-p collapse happens where it should.
    pub fn deriv_s(&self) -> Self {
        let k = self.field;
        if self.degree < 1 {
            return Self::zero(k);
        }
        let d = self.degree as usize;
        let coeffs = (0..d)
            .map(|i| k.mul(&self.coeffs[i], &k.from_i64((d - i) as i64)))
            .collect();
        Self::from_coeffs(k, coeffs)
    }

    pub fn deriv_t(&self) -> Self {
        let k = self.field;
        if self.degree < 1 {
            return Self::zero(k);
        }
        let d = self.degree as usize;
        let coeffs = (1..=d)
            .map(|i| k.mul(&self.coeffs[i], &k.from_i64(i as i64)))
            .collect();
        Self::from_coeffs(k, coeffs)
    }

    /// Orders of vanishing along `s = 0` and `t = 0`:
    /// `v_s` is the power of `s` dividing the form, `v_t` the power of `t`.
    pub fn valuations(&self) -> (usize, usize) {
        assert!(!self.is_zero(), "valuations of the zero form");
        let k = self.field;
        let first = self.coeffs.iter().position(|c| !k.is_zero(c)).unwrap();
        let last = self.coeffs.iter().rposition(|c| !k.is_zero(c)).unwrap();
        // coefficient i sits on s^(d-i) t^i
        let d = self.degree as usize;
        (d - last, first)
    }

    /// Dehomogenize after stripping `s`/`t` factors: returns the univariate
    /// coefficient vector `u[j] = coeff of x^j` (with `x = t/s`), which has
    /// nonzero constant and leading coefficients.
    fn stripped_univariate(&self) -> (usize, usize, Vec<K::Elem>) {
        let (vs, vt) = self.valuations();
        let d = self.degree as usize;
        let u: Vec<K::Elem> = self.coeffs[vt..=d - vs].to_vec();
        (vs, vt, u)
    }

    fn from_univariate(field: K, vs: usize, vt: usize, u: &[K::Elem]) -> Self {
        // homogenize u (degree = u.len()-1) and multiply back s^vs t^vt
        let mut coeffs = vec![field.zero(); vt];
        coeffs.extend_from_slice(u);
        coeffs.extend(std::iter::repeat_with(|| field.zero()).take(vs));
        Self::from_coeffs(field, coeffs)
    }

    /// Exact division; `None` when the divisor does not divide `self`.
    pub fn divide_exact(&self, divisor: &Self) -> Option<Self> {
        let k = self.field;
        assert!(!divisor.is_zero(), "division by the zero form");
        if self.is_zero() {
            return Some(Self::zero(k));
        }
        if divisor.degree > self.degree {
            return None;
        }
        let (ns, nt, nu) = self.stripped_univariate();
        let (ds, dt, du) = divisor.stripped_univariate();
        if ds > ns || dt > nt {
            return None;
        }
        let q = uni_divide_exact(k, &nu, &du)?;
        Some(Self::from_univariate(k, ns - ds, nt - dt, &q))
    }

    /// Monic gcd (first nonzero coefficient 1); both inputs may be zero as
    /// long as one is not.
    pub fn gcd(&self, other: &Self) -> Self {
        let k = self.field;
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (as_, at, au) = self.stripped_univariate();
        let (bs, bt, bu) = other.stripped_univariate();
        let g = uni_gcd(k, au, bu);
        Self::from_univariate(k, as_.min(bs), at.min(bt), &g).monic()
    }

    /// Normalize so the first nonzero coefficient is 1.
    pub fn monic(&self) -> Self {
        let k = self.field;
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.coeffs.iter().find(|c| !k.is_zero(c)).unwrap();
        let inv = k.inv(lead).expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Substitute `s -> m[0][0] s + m[0][1] t`, `t -> m[1][0] s + m[1][1] t`.
    pub fn reparametrize(&self, m: &[[K::Elem; 2]; 2]) -> Self {
        let k = self.field;
        if self.is_zero() {
            return self.clone();
        }
        let new_s = Self::from_coeffs(k, vec![m[0][0].clone(), m[0][1].clone()]);
        let new_t = Self::from_coeffs(k, vec![m[1][0].clone(), m[1][1].clone()]);
        let d = self.degree as usize;
        let mut s_pows = vec![Self::one(k)];
        let mut t_pows = vec![Self::one(k)];
        for i in 1..=d {
            s_pows.push(s_pows[i - 1].mul(&new_s));
            t_pows.push(t_pows[i - 1].mul(&new_t));
        }
        let mut acc = Self::zero(k);
        for (i, c) in self.coeffs.iter().enumerate() {
            if k.is_zero(c) {
                continue;
            }
            acc = acc.add(&s_pows[d - i].mul(&t_pows[i]).scale(c));
        }
        // degree is preserved only when the substitution is invertible;
        // callers pass invertible matrices, but a degenerate one may collapse
        // the form, which from_coeffs/add handle (result may be zero).
        acc
    }

    pub fn random(field: K, degree: u32, rng: &mut dyn RngCore, height: u32) -> Self {
        let coeffs = (0..=degree as usize)
            .map(|_| field.random_elem(rng, height))
            .collect();
        Self::from_coeffs(field, coeffs)
    }
}

/// Monic gcd of dense univariate coefficient vectors (low degree first).
fn uni_gcd<K: Field>(k: K, a: Vec<K::Elem>, b: Vec<K::Elem>) -> Vec<K::Elem> {
    let mut a = trim(k, a);
    let mut b = trim(k, b);
    while !b.is_empty() {
        let r = uni_rem(k, &a, &b);
        a = b;
        b = r;
    }
    // normalize monic in the univariate sense (leading coefficient 1)
    let lead = a.last().expect("gcd of two zero polynomials").clone();
    let inv = k.inv(&lead).expect("nonzero leading coefficient");
    a.iter().map(|c| k.mul(c, &inv)).collect()
}

fn trim<K: Field>(k: K, mut v: Vec<K::Elem>) -> Vec<K::Elem> {
    while v.last().is_some_and(|c| k.is_zero(c)) {
        v.pop();
    }
    v
}

fn uni_rem<K: Field>(k: K, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
    let mut r: Vec<K::Elem> = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = k.inv(&b[db]).expect("nonzero divisor");
    while r.len() > db {
        let dr = r.len() - 1;
        let q = k.mul(&r[dr], &lead_inv);
        if !k.is_zero(&q) {
            for (i, bc) in b.iter().enumerate() {
                let sub = k.mul(&q, bc);
                r[dr - db + i] = k.sub(&r[dr - db + i], &sub);
            }
        }
        r.pop();
        r = trim(k, r);
        if r.is_empty() {
            break;
        }
    }
    trim(k, r)
}

fn uni_divide_exact<K: Field>(k: K, a: &[K::Elem], b: &[K::Elem]) -> Option<Vec<K::Elem>> {
    if a.len() < b.len() {
        return None;
    }
    let mut r: Vec<K::Elem> = a.to_vec();
    let db = b.len() - 1;
    let dq = a.len() - b.len();
    let lead_inv = k.inv(&b[db]).expect("nonzero divisor");
    let mut q = vec![k.zero(); dq + 1];
    for step in (0..=dq).rev() {
        let top = r.get(step + db).cloned().unwrap_or_else(|| k.zero());
        let qc = k.mul(&top, &lead_inv);
        if !k.is_zero(&qc) {
            for (i, bc) in b.iter().enumerate() {
                let sub = k.mul(&qc, bc);
                r[step + i] = k.sub(&r[step + i], &sub);
            }
        }
        q[step] = qc;
    }
    if r.iter().all(|c| k.is_zero(c)) {
        Some(q)
    } else {
        None
    }
}

/// Monic gcd of a family, skipping zero members.
pub fn gcd_many<K: Field>(forms: &[BinaryForm<K>]) -> Result<BinaryForm<K>> {
    let mut acc: Option<BinaryForm<K>> = None;
    for f in forms {
        if f.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => f.monic(),
            Some(g) => g.gcd(f),
        });
        if let Some(g) = &acc {
            if g.degree() == 0 {
                break; // cannot get any smaller
            }
        }
    }
    acc.ok_or(Error::AllZero)
}

impl<K: Field> std::fmt::Display for BinaryForm<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let k = self.field;
        let d = self.degree as usize;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if k.is_zero(c) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let cs = k.format_elem(c);
            let mono = match (d - i, i) {
                (0, 0) => String::new(),
                (a, 0) => pow_str("s", a),
                (0, b) => pow_str("t", b),
                (a, b) => format!("{}{}", pow_str("s", a), pow_str("t", b)),
            };
            if mono.is_empty() {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{cs}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn pow_str(v: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q() -> Rationals {
        Rationals
    }

    fn form_q(coeffs: &[i64]) -> BinaryForm<Rationals> {
        BinaryForm::from_coeffs(q(), coeffs.iter().map(|&c| q().from_i64(c)).collect())
    }

    #[test]
    fn zero_form_has_degree_minus_one() {
        let z = form_q(&[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), -1);
        assert_eq!(z.coeffs().len(), 0);
    }

    #[test]
    fn product_and_sum_degrees() {
        let a = form_q(&[1, 1]); // s + t
        let b = form_q(&[1, -1]); // s - t
        let p = a.mul(&b); // s^2 - t^2
        assert_eq!(p, form_q(&[1, 0, -1]));
        let s = a.add(&a);
        assert_eq!(s, form_q(&[2, 2]));
        let cancel = a.sub(&a);
        assert!(cancel.is_zero());
    }

    #[test]
    fn derivative_drops_characteristic_multiples() {
        let f2 = PrimeField::new(2).unwrap();
        // s^2 over F_2: d/ds = 2s = 0
        let sq = BinaryForm::monomial(f2, 2, 0);
        assert!(sq.deriv_s().is_zero());
        // st: d/ds = t
        let st = BinaryForm::monomial(f2, 2, 1);
        assert_eq!(st.deriv_s(), BinaryForm::var_t(f2));
    }

    #[test]
    fn gcd_examples() {
        // gcd(s^2, t^2) = 1
        let s2 = form_q(&[1, 0, 0]);
        let t2 = form_q(&[0, 0, 1]);
        assert_eq!(s2.gcd(&t2).degree(), 0);
        // gcd(st, s^2) = s
        let st = form_q(&[0, 1, 0]);
        assert_eq!(st.gcd(&s2), form_q(&[1]).mul(&BinaryForm::var_s(q())));
        // shared quadratic factor
        let a = form_q(&[1, 1]); // s + t
        let b = form_q(&[1, 2]); // s + 2t
        let c = form_q(&[1, 3]);
        let left = a.mul(&b);
        let right = a.mul(&c);
        assert_eq!(left.gcd(&right), a.monic());
    }

    #[test]
    fn gcd_divides_both() {
        let a = form_q(&[2, 3, 0, 1]);
        let b = form_q(&[0, 1, 4]);
        let g = a.gcd(&b);
        assert!(a.divide_exact(&g).is_some());
        assert!(b.divide_exact(&g).is_some());
    }

    #[test]
    fn exact_division_round_trip() {
        let a = form_q(&[0, 1, 2, 0, 5]);
        let b = form_q(&[3, 0, 1]);
        let p = a.mul(&b);
        assert_eq!(p.divide_exact(&b).unwrap(), a);
        assert_eq!(p.divide_exact(&a).unwrap(), b);
        // t does not divide s^2 + st
        let n = form_q(&[1, 1, 0]);
        assert!(n.divide_exact(&BinaryForm::var_t(q())).is_none());
    }

    #[test]
    fn gcd_many_flags_all_zero() {
        let z: Vec<BinaryForm<Rationals>> = vec![BinaryForm::zero(q()), BinaryForm::zero(q())];
        assert!(matches!(gcd_many(&z), Err(Error::AllZero)));
        let family = vec![BinaryForm::zero(q()), form_q(&[0, 2, 0])];
        assert_eq!(gcd_many(&family).unwrap(), form_q(&[0, 1, 0])); // monic st
    }

    #[test]
    fn evaluation() {
        let f = form_q(&[1, 0, -1]); // s^2 - t^2
        assert_eq!(f.eval(&q().from_i64(3), &q().from_i64(2)), q().from_i64(5));
        let f5 = PrimeField::new(5).unwrap();
        let g = BinaryForm::from_coeffs(f5, vec![1, 0, 4]); // s^2 + 4t^2
        assert_eq!(g.eval(&2, &1), 3); // 4 + 4 = 8 = 3
    }

    #[test]
    fn reparametrization_is_multiplicative() {
        let k = q();
        let m = [
            [k.from_i64(1), k.from_i64(2)],
            [k.from_i64(3), k.from_i64(1)],
        ];
        let a = form_q(&[1, 1]);
        let b = form_q(&[2, 0, 1]);
        let lhs = a.mul(&b).reparametrize(&m);
        let rhs = a.reparametrize(&m).mul(&b.reparametrize(&m));
        assert_eq!(lhs, rhs);
    }
}

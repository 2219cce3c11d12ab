//! Sparse homogeneous forms in `n + 1` variables `x_0 .. x_n`.
//!
//! Terms live in a BTreeMap keyed by exponent vectors (lexicographic order),
//! which keeps iteration and serialization deterministic.

use std::collections::BTreeMap;

use crate::binary::BinaryForm;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiForm<K: Field> {
    field: K,
    n_vars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, K::Elem>,
}

impl<K: Field> MultiForm<K> {
    pub fn zero(field: K, n_vars: usize, degree: u32) -> Self {
        MultiForm {
            field,
            n_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: K,
        n_vars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, K::Elem)>,
    ) -> Result<Self> {
        let mut form = Self::zero(field, n_vars, degree);
        for (exp, c) in terms {
            form.add_term(&exp, c)?;
        }
        Ok(form)
    }

    /// Add `c * x^exp` into the form (merging with an existing term).
    pub fn add_term(&mut self, exp: &[u32], c: K::Elem) -> Result<()> {
        if exp.len() != self.n_vars {
            return Err(Error::BadInput(format!(
                "exponent vector has {} entries, form has {} variables",
                exp.len(),
                self.n_vars
            )));
        }
        if exp.iter().sum::<u32>() != self.degree {
            return Err(Error::BadInput(format!(
                "term {exp:?} is not homogeneous of degree {}",
                self.degree
            )));
        }
        if self.field.is_zero(&c) {
            return Ok(());
        }
        let k = self.field;
        match self.terms.entry(exp.to_vec()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = k.add(e.get(), &c);
                if k.is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &K::Elem)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_vars, other.n_vars);
        assert_eq!(self.degree, other.degree, "sum of inhomogeneous forms");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, c.clone()).expect("validated term");
        }
        out
    }

    pub fn neg(&self) -> Self {
        let k = self.field;
        let mut out = Self::zero(k, self.n_vars, self.degree);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), k.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let k = self.field;
        if k.is_zero(c) {
            return Self::zero(k, self.n_vars, self.degree);
        }
        let mut out = Self::zero(k, self.n_vars, self.degree);
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), k.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n_vars, other.n_vars);
        let k = self.field;
        let mut out = Self::zero(k, self.n_vars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&exp, k.mul(ca, cb)).expect("degrees add");
            }
        }
        out
    }

    /// Partial derivative in `x_i`; the exponent multiplies inside the field,
    /// so `d/dx (x^p) = 0` in characteristic `p`.
    pub fn partial_derivative(&self, i: usize) -> Self {
        assert!(i < self.n_vars, "derivative index out of range");
        let k = self.field;
        if self.degree == 0 {
            return Self::zero(k, self.n_vars, 0);
        }
        let mut out = Self::zero(k, self.n_vars, self.degree - 1);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let factor = k.from_i64(e[i] as i64);
            let coeff = k.mul(c, &factor);
            if k.is_zero(&coeff) {
                continue;
            }
            let mut exp = e.clone();
            exp[i] -= 1;
            out.add_term(&exp, coeff).expect("degree drops by one");
        }
        out
    }

    pub fn eval(&self, coords: &[K::Elem]) -> K::Elem {
        assert_eq!(coords.len(), self.n_vars);
        let k = self.field;
        let mut acc = k.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &p) in coords.iter().zip(e) {
                for _ in 0..p {
                    term = k.mul(&term, x);
                }
            }
            acc = k.add(&acc, &term);
        }
        acc
    }

    /// Substitute binary forms for the variables: the restriction of the form
    /// to the rational curve with the given components.  Components of a
    /// common degree `e` yield a binary form of degree `degree * e`.
    pub fn compose(&self, components: &[BinaryForm<K>]) -> BinaryForm<K> {
        assert_eq!(components.len(), self.n_vars);
        let k = self.field;
        // memoize powers of each component up to its maximal exponent
        let mut max_pow = vec![0u32; self.n_vars];
        for e in self.terms.keys() {
            for (m, &p) in max_pow.iter_mut().zip(e) {
                *m = (*m).max(p);
            }
        }
        let pows: Vec<Vec<BinaryForm<K>>> = components
            .iter()
            .zip(&max_pow)
            .map(|(f, &m)| {
                let mut v = vec![BinaryForm::one(k)];
                for i in 1..=m as usize {
                    v.push(v[i - 1].mul(f));
                }
                v
            })
            .collect();
        let mut acc = BinaryForm::zero(k);
        for (e, c) in &self.terms {
            let mut term = BinaryForm::constant(k, c.clone());
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    term = term.mul(&pows[i][p as usize]);
                }
            }
            // nonzero substituted terms all share degree * e when the
            // components share degree e; add() enforces that
            acc = acc.add(&term);
        }
        acc
    }

    /// Apply the linear change of coordinates `x_i -> sum_j m[i][j] x_j`.
    pub fn substitute_linear(&self, m: &Mat<K>) -> Self {
        assert_eq!(m.rows(), self.n_vars);
        assert_eq!(m.cols(), self.n_vars);
        let k = self.field;
        // linear forms replacing each variable
        let line = |i: usize| -> MultiForm<K> {
            let mut f = Self::zero(k, self.n_vars, 1);
            for j in 0..self.n_vars {
                let mut e = vec![0u32; self.n_vars];
                e[j] = 1;
                f.add_term(&e, m.get(i, j).clone()).expect("linear term");
            }
            f
        };
        let lines: Vec<MultiForm<K>> = (0..self.n_vars).map(line).collect();
        let mut max_pow = vec![0u32; self.n_vars];
        for e in self.terms.keys() {
            for (mx, &p) in max_pow.iter_mut().zip(e) {
                *mx = (*mx).max(p);
            }
        }
        let pows: Vec<Vec<MultiForm<K>>> = lines
            .iter()
            .zip(&max_pow)
            .map(|(f, &mx)| {
                let mut v = vec![Self::from_terms(
                    k,
                    self.n_vars,
                    0,
                    [(vec![0; self.n_vars], k.one())],
                )
                .expect("constant")];
                for i in 1..=mx as usize {
                    v.push(v[i - 1].mul(f));
                }
                v
            })
            .collect();
        let mut acc = Self::zero(k, self.n_vars, self.degree);
        for (e, c) in &self.terms {
            let mut term: Option<MultiForm<K>> = None;
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    term = Some(match term {
                        None => pows[i][p as usize].clone(),
                        Some(t) => t.mul(&pows[i][p as usize]),
                    });
                }
            }
            let term = match term {
                None => {
                    // degree-0 form: constant term survives unchanged
                    acc.add_term(e, c.clone()).expect("constant term");
                    continue;
                }
                Some(t) => t.scale(c),
            };
            acc = acc.add(&term);
        }
        acc
    }
}

/// All exponent vectors of the given degree in `n_vars` variables, in
/// lexicographic order — the monomial basis used by linear systems.
pub fn monomials(n_vars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n_vars];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, i: usize, left: u32) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        // lexicographic descending in the leading variable gives lex order
        for v in (0..=left).rev() {
            cur[i] = v;
            rec(out, cur, i + 1, left - v);
        }
    }
    if n_vars == 0 {
        return out;
    }
    rec(&mut out, &mut cur, 0, degree);
    out.sort(); // ascending lex for a stable, documented order
    out
}

/// Binomial coefficient as an exact usize (arguments stay tiny here).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

impl<K: Field> std::fmt::Display for MultiForm<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let k = self.field;
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut mono = String::new();
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => mono.push_str(&format!("x{i}")),
                    _ => mono.push_str(&format!("x{i}^{p}")),
                }
            }
            let cs = k.format_elem(c);
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn monomial_count_matches_binomial() {
        assert_eq!(monomials(5, 4).len(), binomial(8, 4));
        assert_eq!(monomials(3, 0).len(), 1);
        let ms = monomials(2, 3);
        assert_eq!(ms, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
    }

    #[test]
    fn partial_derivative_examples() {
        let q = Rationals;
        // x0 x1 -> d/dx0 = x1
        let f = MultiForm::from_terms(q, 2, 2, [(vec![1, 1], q.one())]).unwrap();
        let d = f.partial_derivative(0);
        assert_eq!(d.terms().next().unwrap().0, &vec![0, 1]);
        // x0^2 over F_2 -> 0
        let f2 = PrimeField::new(2).unwrap();
        let g = MultiForm::from_terms(f2, 1, 2, [(vec![2], 1u64)]).unwrap();
        assert!(g.partial_derivative(0).is_zero());
    }

    #[test]
    fn composition_restricts_to_curves() {
        let q = Rationals;
        // F = x0 x2 - x1^2 on the conic (s^2, st, t^2) vanishes
        let f = MultiForm::from_terms(
            q,
            3,
            2,
            [(vec![1, 0, 1], q.one()), (vec![0, 2, 0], q.from_i64(-1))],
        )
        .unwrap();
        let conic = [
            BinaryForm::monomial(q, 2, 0),
            BinaryForm::monomial(q, 2, 1),
            BinaryForm::monomial(q, 2, 2),
        ];
        assert!(f.compose(&conic).is_zero());
        // and x0 x2 alone restricts to s^2 t^2
        let g = MultiForm::from_terms(q, 3, 2, [(vec![1, 0, 1], q.one())]).unwrap();
        assert_eq!(g.compose(&conic), BinaryForm::monomial(q, 4, 2));
    }

    #[test]
    fn composition_is_multiplicative() {
        let q = Rationals;
        let a = MultiForm::from_terms(
            q,
            2,
            1,
            [(vec![1, 0], q.one()), (vec![0, 1], q.from_i64(2))],
        )
        .unwrap();
        let b = MultiForm::from_terms(
            q,
            2,
            2,
            [(vec![2, 0], q.from_i64(3)), (vec![1, 1], q.one())],
        )
        .unwrap();
        let comps = [
            BinaryForm::from_coeffs(q, vec![q.from_i64(1), q.from_i64(1)]),
            BinaryForm::from_coeffs(q, vec![q.from_i64(2), q.from_i64(-1)]),
        ];
        assert_eq!(
            a.mul(&b).compose(&comps),
            a.compose(&comps).mul(&b.compose(&comps))
        );
    }
}

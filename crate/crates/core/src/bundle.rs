//! Graded free modules over the homogeneous coordinate ring of the
//! projective line, maps between them, and splitting-type computations.
//!
//! A direct sum of line bundles on the projective line is recorded by its
//! list of twists.  A map `⊕O(a_j) → ⊕O(b_i)` is a matrix of binary forms
//! with entry `(i, j)` homogeneous of degree `b_i − a_j` (or zero).  Two
//! independent routes recover the splitting type of a kernel bundle:
//!
//! * [`GradedMap::syzygy_kernel`] finds an explicit free generating set by
//!   scanning twists and certifies it with a minor-gcd computation;
//! * [`GradedMap::kernel_splitting_via_h0`] only counts global sections at
//!   each twist and reconstructs the splitting from the count profile.
//!
//! The two routes share low-level polynomial arithmetic but no intermediate
//! results, so they cross-check each other.

use serde::{Deserialize, Serialize};

use crate::binary::BinaryForm;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{rank_of_span, Mat};
use crate::point::ProjectivePoint;

/// Splitting type of a vector bundle on the projective line: the multiset
/// of twists of its line-bundle summands, kept sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplittingType {
    degrees: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut degrees: Vec<i64>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { degrees }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn c1(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn negate(&self) -> Self {
        Self::new(self.degrees.iter().map(|d| -d).collect())
    }

    pub fn twist(&self, k: i64) -> Self {
        Self::new(self.degrees.iter().map(|d| d + k).collect())
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.last().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.first().copied()
    }

    /// Number of summands of the given twist.
    pub fn count(&self, degree: i64) -> usize {
        self.degrees.iter().filter(|&&d| d == degree).count()
    }

    pub fn all_at_least(&self, bound: i64) -> bool {
        self.degrees.iter().all(|&d| d >= bound)
    }

    /// Section count `h⁰` after twisting by `k`.
    pub fn h0(&self, k: i64) -> usize {
        self.degrees.iter().map(|&d| dim_forms(d + k)).sum()
    }
}

impl std::fmt::Display for SplittingType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.degrees.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.degrees.iter().map(|d| format!("O({d})")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Dimension of the space of binary forms of degree `d` (zero for `d < 0`).
pub fn dim_forms(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        d as usize + 1
    }
}

/// Values of the degree-`d` monomials at a point of the projective line,
/// ordered by ascending exponent of the second variable.
fn monomial_values_at<K: Field>(field: K, d: i64, p0: &K::Elem, p1: &K::Elem) -> Vec<K::Elem> {
    let n = dim_forms(d);
    if n == 0 {
        return Vec::new();
    }
    let deg = d as usize;
    let mut pow0 = Vec::with_capacity(deg + 1);
    let mut pow1 = Vec::with_capacity(deg + 1);
    pow0.push(field.one());
    pow1.push(field.one());
    for i in 1..=deg {
        let a = field.mul(&pow0[i - 1], p0);
        let b = field.mul(&pow1[i - 1], p1);
        pow0.push(a);
        pow1.push(b);
    }
    (0..=deg)
        .map(|u| field.mul(&pow0[deg - u], &pow1[u]))
        .collect()
}

/// All `k`-element subsets of `{0, …, n−1}` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Determinant of a square matrix of binary forms by fraction-free
/// (Bareiss) elimination; exact over the polynomial ring.
fn det_form<K: Field>(field: K, mut a: Vec<Vec<BinaryForm<K>>>) -> BinaryForm<K> {
    let n = a.len();
    if n == 0 {
        return BinaryForm::one(field);
    }
    let mut flip = false;
    let mut prev = BinaryForm::one(field);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BinaryForm::zero(field);
        };
        if p != k {
            a.swap(p, k);
            flip = !flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .divide_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            a[i][k] = BinaryForm::zero(field);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if flip {
        d.neg()
    } else {
        d
    }
}

/// A map of graded free modules `⊕_j O(a_j) → ⊕_i O(b_i)`, stored as a
/// matrix of binary forms with rows indexed by the codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<K: Field> {
    field: K,
    domain: Vec<i64>,
    codomain: Vec<i64>,
    entries: Vec<Vec<BinaryForm<K>>>,
}

impl<K: Field> GradedMap<K> {
    /// Each nonzero entry `(i, j)` must be homogeneous of degree
    /// `codomain[i] − domain[j]`; zero entries are always allowed.
    pub fn new(
        field: K,
        domain: Vec<i64>,
        codomain: Vec<i64>,
        entries: Vec<Vec<BinaryForm<K>>>,
    ) -> Result<Self> {
        if entries.len() != codomain.len() {
            return Err(Error::BadInput(format!(
                "matrix has {} rows but the codomain has {} summands",
                entries.len(),
                codomain.len()
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != domain.len() {
                return Err(Error::BadInput(format!(
                    "row {i} has {} entries but the domain has {} summands",
                    row.len(),
                    domain.len()
                )));
            }
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() && e.degree() != codomain[i] - domain[j] {
                    return Err(Error::BadInput(format!(
                        "entry ({i}, {j}) has degree {} but must have degree {}",
                        e.degree(),
                        codomain[i] - domain[j]
                    )));
                }
            }
        }
        Ok(GradedMap {
            field,
            domain,
            codomain,
            entries,
        })
    }

    /// Single-row map `⊕O(a_j) → O(b)`.
    pub fn row(field: K, domain: Vec<i64>, target: i64, entries: Vec<BinaryForm<K>>) -> Result<Self> {
        Self::new(field, domain, vec![target], vec![entries])
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn domain(&self) -> &[i64] {
        &self.domain
    }

    pub fn codomain(&self) -> &[i64] {
        &self.codomain
    }

    pub fn rows(&self) -> usize {
        self.codomain.len()
    }

    pub fn cols(&self) -> usize {
        self.domain.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BinaryForm<K> {
        &self.entries[i][j]
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.domain != other.codomain {
            return Err(Error::BadInput(
                "composition needs matching middle summands".into(),
            ));
        }
        let mut entries = Vec::with_capacity(self.rows());
        for i in 0..self.rows() {
            let mut row = Vec::with_capacity(other.cols());
            for j in 0..other.cols() {
                let mut acc = BinaryForm::zero(self.field);
                for l in 0..self.cols() {
                    let a = &self.entries[i][l];
                    let b = &other.entries[l][j];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                row.push(acc);
            }
            entries.push(row);
        }
        Self::new(self.field, other.domain.clone(), self.codomain.clone(), entries)
    }

    /// Apply the map to a section of the twisted domain `⊕O(a_j + k)`:
    /// component `j` must be zero or homogeneous of degree `a_j + k`.
    pub fn apply_twisted(&self, k: i64, section: &[BinaryForm<K>]) -> Result<Vec<BinaryForm<K>>> {
        if section.len() != self.cols() {
            return Err(Error::BadInput(
                "section length must match the domain".into(),
            ));
        }
        for (j, g) in section.iter().enumerate() {
            if !g.is_zero() && g.degree() != self.domain[j] + k {
                return Err(Error::BadInput(format!(
                    "section component {j} has degree {} but must have degree {}",
                    g.degree(),
                    self.domain[j] + k
                )));
            }
        }
        let mut out = Vec::with_capacity(self.rows());
        for i in 0..self.rows() {
            let mut acc = BinaryForm::zero(self.field);
            for j in 0..self.cols() {
                let e = &self.entries[i][j];
                let g = &section[j];
                if e.is_zero() || g.is_zero() {
                    continue;
                }
                acc = acc.add(&e.mul(g));
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Matrix of entry values at a point of the projective line.
    pub fn evaluate_at(&self, p: &ProjectivePoint<K>) -> Mat<K> {
        let mut m = Mat::zeros(self.field, self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                m.set(i, j, self.entries[i][j].eval_point(p));
            }
        }
        m
    }

    /// Substitute a linear change of coordinates on the projective line
    /// into every entry.
    pub fn reparametrize(&self, m: &[[K::Elem; 2]; 2]) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| e.reparametrize(m)).collect())
            .collect();
        GradedMap {
            field: self.field,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries,
        }
    }

    /// Greatest common divisor of all `size × size` minors, monic, with an
    /// early exit once the running gcd reaches degree zero.  Fails with
    /// [`Error::AllZero`] when every minor vanishes.
    pub fn minors_gcd(&self, size: usize) -> Result<BinaryForm<K>> {
        if size == 0 {
            return Ok(BinaryForm::one(self.field));
        }
        if size > self.rows() || size > self.cols() {
            return Err(Error::AllZero);
        }
        let mut acc: Option<BinaryForm<K>> = None;
        for rows in combinations(self.rows(), size) {
            for cols in combinations(self.cols(), size) {
                let sub: Vec<Vec<BinaryForm<K>>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                    .collect();
                let d = det_form(self.field, sub);
                if d.is_zero() {
                    continue;
                }
                let g = match &acc {
                    None => d.monic(),
                    Some(cur) => cur.gcd(&d),
                };
                if g.degree() == 0 {
                    return Ok(g);
                }
                acc = Some(g);
            }
        }
        acc.ok_or(Error::AllZero)
    }

    /// Rank of the matrix over the fraction field of the coordinate ring:
    /// the largest size of a nonvanishing minor.
    pub fn generic_rank(&self) -> usize {
        let max = self.rows().min(self.cols());
        for size in (1..=max).rev() {
            let any_nonzero = combinations(self.rows(), size).iter().any(|rows| {
                combinations(self.cols(), size).iter().any(|cols| {
                    let sub: Vec<Vec<BinaryForm<K>>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                        .collect();
                    !det_form(self.field, sub).is_zero()
                })
            });
            if any_nonzero {
                return size;
            }
        }
        0
    }

    /// Is the map surjective on every fiber?  Equivalent to the maximal
    /// minors having no common zero on the projective line.
    pub fn is_fiberwise_surjective(&self) -> bool {
        match self.minors_gcd(self.rows()) {
            Ok(g) => g.degree() == 0,
            Err(_) => false,
        }
    }

    /// Layout of the coefficient space of sections of `⊕O(c_t + k)`:
    /// summand `t` contributes `dim_forms(c_t + k)` consecutive slots.
    fn layout(twists: &[i64], k: i64) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(twists.len());
        let mut total = 0usize;
        for &c in twists {
            offsets.push(total);
            total += dim_forms(c + k);
        }
        (offsets, total)
    }

    /// Matrix of the induced map on global sections at twist `k`, acting on
    /// coefficient vectors laid out by [`GradedMap::layout`].
    pub fn section_matrix(&self, k: i64) -> Mat<K> {
        let field = self.field;
        let (dom_off, dom_total) = Self::layout(&self.domain, k);
        let (cod_off, cod_total) = Self::layout(&self.codomain, k);
        let mut m = Mat::zeros(field, cod_total, dom_total);
        for j in 0..self.cols() {
            let dj = self.domain[j] + k;
            if dj < 0 {
                continue;
            }
            for i in 0..self.rows() {
                let e = &self.entries[i][j];
                if e.is_zero() {
                    continue;
                }
                let deg = e.degree() as usize;
                for u in 0..=dj as usize {
                    for w in 0..=deg {
                        let row = cod_off[i] + u + w;
                        let col = dom_off[j] + u;
                        let v = field.add(m.get(row, col), &e.coeff(w));
                        m.set(row, col, v);
                    }
                }
            }
        }
        m
    }

    /// Section count of the kernel sheaf at twist `k`: the dimension of the
    /// space of domain sections annihilated by the map.
    pub fn h0_kernel(&self, k: i64) -> usize {
        let (_, dom_total) = Self::layout(&self.domain, k);
        if dom_total == 0 {
            return 0;
        }
        dom_total - self.section_matrix(k).rank()
    }

    /// Splitting type of the kernel bundle, recovered purely from the
    /// section-count profile of the kernel sheaf.  Requires fiberwise
    /// surjectivity, so that the kernel is a subbundle of known rank and
    /// degree.
    pub fn kernel_splitting_via_h0(&self) -> Result<SplittingType> {
        if !self.is_fiberwise_surjective() {
            return Err(Error::NotSurjective);
        }
        let rank = self.cols() - self.rows();
        let c1 = self.domain.iter().sum::<i64>() - self.codomain.iter().sum::<i64>();
        let max_a = self.domain.iter().copied().max().unwrap_or(0);
        splitting_from_h0_profile(rank, c1, -max_a - 1, |k| self.h0_kernel(k))
    }

    /// Explicit free generating set of the kernel.
    ///
    /// With `saturate == false` the map must be fiberwise surjective and the
    /// kernel is a subbundle with rank and degree known in advance; both are
    /// verified.  With `saturate == true` the expected rank comes from the
    /// generic rank of the matrix instead and no degree formula is assumed;
    /// the result is still the kernel sheaf, which on a smooth curve is
    /// automatically a subbundle.
    ///
    /// Either way the returned generators are certified: the gcd of the
    /// maximal minors of the embedding has degree zero, so the generators
    /// stay independent on every fiber.
    pub fn syzygy_kernel(&self, saturate: bool) -> Result<FreeGradedModule<K>> {
        let field = self.field;
        let m = self.cols();
        if m == 0 {
            return Err(Error::BadInput("kernel of a map with empty domain".into()));
        }
        let (expected_rank, expected_c1): (usize, Option<i64>) = if saturate {
            (m - self.generic_rank(), None)
        } else {
            if !self.is_fiberwise_surjective() {
                return Err(Error::NotSurjective);
            }
            let c1 = self.domain.iter().sum::<i64>() - self.codomain.iter().sum::<i64>();
            (m - self.rows(), Some(c1))
        };

        let max_a = self.domain.iter().copied().max().unwrap();
        let k_min = -max_a;
        let k_cap = {
            // Every kernel twist c satisfies c ≤ max_a; with a known degree the
            // smallest twist is bounded below, otherwise fall back to a coarse
            // bound from the entry degrees.
            let r = expected_rank as i64;
            match expected_c1 {
                Some(c1) if r > 0 => ((r - 1) * max_a - c1).max(k_min) + 2,
                Some(_) => k_min,
                None => {
                    let max_b = self.codomain.iter().copied().max().unwrap_or(0);
                    let min_a = self.domain.iter().copied().min().unwrap();
                    let sa: i64 = self.domain.iter().sum();
                    let sb: i64 = self.codomain.iter().sum();
                    k_min + (max_b - min_a).abs() + (sa - sb).abs() + 6
                }
            }
        };

        let mut gens: Vec<(i64, Vec<BinaryForm<K>>)> = Vec::new();
        let mut k = k_min;
        while gens.len() < expected_rank {
            if k > k_cap {
                return Err(Error::CapExceeded(k));
            }
            let (dom_off, dom_total) = Self::layout(&self.domain, k);
            if dom_total > 0 {
                let nullspace = self.section_matrix(k).nullspace();
                if !nullspace.is_empty() {
                    // Coefficient vectors of multiples of already-found
                    // generators at this twist.
                    let mut span: Vec<Vec<K::Elem>> = Vec::new();
                    for (kg, g) in &gens {
                        let step = (k - kg) as u32;
                        for u in 0..=step {
                            let mon = BinaryForm::monomial(field, step, u);
                            let mult: Vec<BinaryForm<K>> =
                                g.iter().map(|c| c.mul(&mon)).collect();
                            span.push(self.tuple_coeffs(&mult, k, &dom_off, dom_total));
                        }
                    }
                    let mut rank = rank_of_span(field, &span);
                    for v in nullspace {
                        span.push(v.clone());
                        let new_rank = rank_of_span(field, &span);
                        if new_rank > rank {
                            rank = new_rank;
                            gens.push((k, self.tuple_from_coeffs(&v, k)));
                            if gens.len() == expected_rank {
                                break;
                            }
                        } else {
                            span.pop();
                        }
                    }
                }
            }
            k += 1;
        }

        let twists: Vec<i64> = gens.iter().map(|(kg, _)| -kg).collect();
        let entries: Vec<Vec<BinaryForm<K>>> = (0..m)
            .map(|j| gens.iter().map(|(_, g)| g[j].clone()).collect())
            .collect();
        let embedding = Self::new(field, twists.clone(), self.domain.clone(), entries)?;

        // Certificate: the generators span the kernel fiber everywhere.
        if expected_rank > 0 {
            let g = embedding.minors_gcd(expected_rank).map_err(|_| {
                Error::CheckFailed("kernel generators are generically dependent".into())
            })?;
            if g.degree() != 0 {
                return Err(Error::CheckFailed(
                    "kernel generators do not span every fiber".into(),
                ));
            }
        }
        if let Some(c1) = expected_c1 {
            let total: i64 = twists.iter().sum();
            if total != c1 {
                return Err(Error::CheckFailed(format!(
                    "kernel degree {total} differs from expected {c1}"
                )));
            }
        }
        FreeGradedModule::from_embedding(twists, embedding)
    }

    /// Coefficient vector of a domain section tuple at twist `k`.
    fn tuple_coeffs(
        &self,
        tuple: &[BinaryForm<K>],
        k: i64,
        offsets: &[usize],
        total: usize,
    ) -> Vec<K::Elem> {
        let field = self.field;
        let mut out = vec![field.zero(); total];
        for (j, g) in tuple.iter().enumerate() {
            let d = self.domain[j] + k;
            if d < 0 || g.is_zero() {
                continue;
            }
            for u in 0..=d as usize {
                out[offsets[j] + u] = g.coeff(u);
            }
        }
        out
    }

    /// Inverse of [`GradedMap::tuple_coeffs`].
    fn tuple_from_coeffs(&self, coeffs: &[K::Elem], k: i64) -> Vec<BinaryForm<K>> {
        let field = self.field;
        let (offsets, _) = Self::layout(&self.domain, k);
        self.domain
            .iter()
            .enumerate()
            .map(|(j, &a)| {
                let d = a + k;
                if d < 0 {
                    BinaryForm::zero(field)
                } else {
                    let n = dim_forms(d);
                    BinaryForm::from_coeffs(field, coeffs[offsets[j]..offsets[j] + n].to_vec())
                }
            })
            .collect()
    }
}

/// Recover a splitting type from its section-count profile.
///
/// `h(k)` must be the section count of a twist-`k` twist of a bundle of the
/// given rank and degree on the projective line, and `h(k_start)` must be
/// zero.  The number of new summands appearing at each twist is the second
/// difference of the profile.
pub fn splitting_from_h0_profile(
    rank: usize,
    c1: i64,
    k_start: i64,
    mut h: impl FnMut(i64) -> usize,
) -> Result<SplittingType> {
    if rank == 0 {
        if c1 != 0 {
            return Err(Error::CheckFailed(
                "rank-zero bundle with nonzero degree".into(),
            ));
        }
        return Ok(SplittingType::new(Vec::new()));
    }
    let at_start = h(k_start);
    if at_start != 0 {
        return Err(Error::CheckFailed(format!(
            "section count at twist {k_start} expected 0, found {at_start}"
        )));
    }
    // All summand degrees are at most −k_start − 1; with the degree fixed the
    // smallest summand degree is bounded below, which bounds the scan.
    let ub = (-k_start - 1).max(0);
    let cap = ((rank as i64 - 1) * ub - c1).max(k_start) + 2;
    let mut prev_h = 0usize;
    let mut prev_delta = 0usize;
    let mut degrees: Vec<i64> = Vec::new();
    let mut k = k_start + 1;
    while k <= cap {
        let cur = h(k);
        if cur < prev_h {
            return Err(Error::CheckFailed(format!(
                "section count decreased from {prev_h} to {cur} at twist {k}"
            )));
        }
        let delta = cur - prev_h;
        if delta < prev_delta {
            return Err(Error::CheckFailed(format!(
                "section-count growth decreased at twist {k}"
            )));
        }
        for _ in 0..delta - prev_delta {
            degrees.push(-k);
        }
        if degrees.len() > rank {
            return Err(Error::CheckFailed(format!(
                "profile produced more than {rank} summands"
            )));
        }
        if delta == rank {
            let total: i64 = degrees.iter().sum();
            if total != c1 {
                return Err(Error::CheckFailed(format!(
                    "profile degrees sum to {total}, expected {c1}"
                )));
            }
            return Ok(SplittingType::new(degrees));
        }
        prev_h = cur;
        prev_delta = delta;
        k += 1;
    }
    Err(Error::CapExceeded(cap))
}

/// A free graded module presented by a list of twists together with an
/// embedding into an ambient graded free module.
#[derive(Clone, Debug)]
pub struct FreeGradedModule<K: Field> {
    field: K,
    twists: Vec<i64>,
    embedding: GradedMap<K>,
}

impl<K: Field> FreeGradedModule<K> {
    /// The free module on the given twists, embedded in itself.
    pub fn free(field: K, twists: Vec<i64>) -> Self {
        let n = twists.len();
        let entries: Vec<Vec<BinaryForm<K>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BinaryForm::one(field)
                        } else {
                            BinaryForm::zero(field)
                        }
                    })
                    .collect()
            })
            .collect();
        let embedding = GradedMap::new(field, twists.clone(), twists.clone(), entries)
            .expect("identity embedding is graded");
        FreeGradedModule {
            field,
            twists,
            embedding,
        }
    }

    pub fn from_embedding(twists: Vec<i64>, embedding: GradedMap<K>) -> Result<Self> {
        if embedding.domain() != twists.as_slice() {
            return Err(Error::BadInput(
                "embedding domain must match the module twists".into(),
            ));
        }
        Ok(FreeGradedModule {
            field: embedding.field(),
            twists,
            embedding,
        })
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn splitting(&self) -> SplittingType {
        SplittingType::new(self.twists.clone())
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn c1(&self) -> i64 {
        self.twists.iter().sum()
    }

    pub fn ambient_twists(&self) -> &[i64] {
        self.embedding.codomain()
    }

    pub fn embedding(&self) -> &GradedMap<K> {
        &self.embedding
    }

    /// Section count at twist `k`.
    pub fn h0(&self, k: i64) -> usize {
        self.twists.iter().map(|&c| dim_forms(c + k)).sum()
    }

    /// Basis of the sections at twist `k` in module coordinates: component
    /// `t` of a basis tuple is a monomial of degree `twists[t] + k`.
    pub fn module_section_basis(&self, k: i64) -> Vec<Vec<BinaryForm<K>>> {
        let field = self.field;
        let mut basis = Vec::new();
        for (t, &c) in self.twists.iter().enumerate() {
            let d = c + k;
            if d < 0 {
                continue;
            }
            for u in 0..=d as u32 {
                let mut tuple: Vec<BinaryForm<K>> =
                    vec![BinaryForm::zero(field); self.twists.len()];
                tuple[t] = BinaryForm::monomial(field, d as u32, u);
                basis.push(tuple);
            }
        }
        basis
    }

    /// Basis of the sections at twist `k` in ambient coordinates.
    pub fn global_sections(&self, k: i64) -> Vec<Vec<BinaryForm<K>>> {
        self.module_section_basis(k)
            .into_iter()
            .map(|tuple| {
                self.embedding
                    .apply_twisted(k, &tuple)
                    .expect("module sections map into the ambient module")
            })
            .collect()
    }

    /// Express an ambient section as a module section: solve for the tuple
    /// `g` with `embedding · g = section` at twist `k`.
    pub fn rewrite_ambient_section(
        &self,
        k: i64,
        section: &[BinaryForm<K>],
    ) -> Result<Vec<BinaryForm<K>>> {
        let ambient = self.ambient_twists();
        if section.len() != ambient.len() {
            return Err(Error::BadInput(
                "section length must match the ambient module".into(),
            ));
        }
        for (j, g) in section.iter().enumerate() {
            if !g.is_zero() && g.degree() != ambient[j] + k {
                return Err(Error::BadInput(format!(
                    "ambient component {j} has degree {} but must have degree {}",
                    g.degree(),
                    ambient[j] + k
                )));
            }
        }
        let (cod_off, cod_total) = GradedMap::<K>::layout(ambient, k);
        let mut rhs = vec![self.field.zero(); cod_total];
        for (j, g) in section.iter().enumerate() {
            let d = ambient[j] + k;
            if d < 0 || g.is_zero() {
                continue;
            }
            for u in 0..=d as usize {
                rhs[cod_off[j] + u] = g.coeff(u);
            }
        }
        let mat = self.embedding.section_matrix(k);
        let sol = mat
            .solve(&rhs)
            .ok_or_else(|| Error::CheckFailed("section does not lie in the submodule".into()))?;
        Ok(self.embedding.tuple_from_coeffs(&sol, k))
    }

    /// Matrix of generator columns evaluated at a point (ambient rows,
    /// generator columns).
    pub fn evaluate_at(&self, p: &ProjectivePoint<K>) -> Mat<K> {
        self.embedding.evaluate_at(p)
    }
}

/// Kernel of the pairing against a nowhere-vanishing co-section.
///
/// Given a free module with the given twists and a section expressed in its
/// coordinates (component `t` of degree `twists[t]`), this returns the
/// annihilator of the section inside the dual module `⊕O(−twists[t])` — the
/// dual of the quotient of the module by the section.  Fails with
/// [`Error::SectionVanishes`] when the section has a zero on the line.
pub fn dual_quotient_by_section<K: Field>(
    field: K,
    twists: &[i64],
    sigma: &[BinaryForm<K>],
) -> Result<FreeGradedModule<K>> {
    if sigma.len() != twists.len() {
        return Err(Error::BadInput(
            "section length must match the module rank".into(),
        ));
    }
    for (t, s) in sigma.iter().enumerate() {
        if !s.is_zero() && s.degree() != twists[t] {
            return Err(Error::BadInput(format!(
                "section component {t} has degree {} but must have degree {}",
                s.degree(),
                twists[t]
            )));
        }
    }
    let dual: Vec<i64> = twists.iter().map(|c| -c).collect();
    let row = GradedMap::row(field, dual, 0, sigma.to_vec())?;
    row.syzygy_kernel(false).map_err(|e| match e {
        Error::NotSurjective => Error::SectionVanishes,
        other => other,
    })
}

/// A point of the projective line together with a fiber direction for an
/// elementary modification.
#[derive(Clone, Debug)]
pub struct ModificationDatum<K: Field> {
    pub point: ProjectivePoint<K>,
    pub direction: Vec<K::Elem>,
}

/// Splitting type of the elementary modification of `⊕O(twists)` at the
/// given points and fiber directions: the sheaf of sections allowed a simple
/// pole along each point's direction.  The rank is unchanged and the degree
/// grows by the number of points.
///
/// Sections of the modification at twist `k` are identified with tuples
/// `(h_t)` of forms of degree `twists[t] + k + #points` whose value at each
/// marked point is proportional to that point's direction; the splitting is
/// reconstructed from those section counts.
pub fn elementary_modification_splitting<K: Field>(
    field: K,
    twists: &[i64],
    data: &[ModificationDatum<K>],
) -> Result<SplittingType> {
    let r = twists.len();
    if r == 0 {
        return Err(Error::BadInput("modification of a rank-zero bundle".into()));
    }
    for d in data {
        if d.point.ambient_dim() != 1 {
            return Err(Error::BadInput(
                "modification points must lie on the projective line".into(),
            ));
        }
        if d.direction.len() != r {
            return Err(Error::BadInput(
                "direction length must match the bundle rank".into(),
            ));
        }
        if d.direction.iter().all(|c| field.is_zero(c)) {
            return Err(Error::ZeroDirection);
        }
    }
    for i in 0..data.len() {
        for j in i + 1..data.len() {
            if data[i].point == data[j].point {
                return Err(Error::DuplicatePoint);
            }
        }
    }
    if data.is_empty() {
        return Ok(SplittingType::new(twists.to_vec()));
    }
    let m = data.len() as i64;
    let c1 = twists.iter().sum::<i64>() + m;
    let max_t = *twists.iter().max().unwrap();
    let k_start = -(max_t + m) - 1;
    let h = |k: i64| -> usize {
        let (offsets, total) = GradedMap::<K>::layout(twists, k + m);
        if total == 0 {
            return 0;
        }
        let mut rows: Vec<Vec<K::Elem>> = Vec::new();
        for datum in data {
            let coords = datum.point.coords();
            let (p0, p1) = (&coords[0], &coords[1]);
            let evals: Vec<Vec<K::Elem>> = twists
                .iter()
                .map(|&c| monomial_values_at(field, c + k + m, p0, p1))
                .collect();
            let pivot = datum
                .direction
                .iter()
                .position(|c| !field.is_zero(c))
                .expect("direction is nonzero");
            for beta in 0..r {
                if beta == pivot {
                    continue;
                }
                // v_pivot · h_beta(p) − v_beta · h_pivot(p) = 0
                let mut row = vec![field.zero(); total];
                for (u, val) in evals[beta].iter().enumerate() {
                    row[offsets[beta] + u] = field.mul(&datum.direction[pivot], val);
                }
                for (u, val) in evals[pivot].iter().enumerate() {
                    let term = field.mul(&datum.direction[beta], val);
                    let cur = row[offsets[pivot] + u].clone();
                    row[offsets[pivot] + u] = field.sub(&cur, &term);
                }
                rows.push(row);
            }
        }
        total - rank_of_span(field, &rows)
    };
    splitting_from_h0_profile(r, c1, k_start, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q() -> Rationals {
        Rationals
    }

    fn s_form(field: Rationals) -> BinaryForm<Rationals> {
        BinaryForm::var_s(field)
    }

    fn t_form(field: Rationals) -> BinaryForm<Rationals> {
        BinaryForm::var_t(field)
    }

    #[test]
    fn splitting_type_basics() {
        let st = SplittingType::new(vec![-1, 2, 0]);
        assert_eq!(st.degrees(), &[2, 0, -1]);
        assert_eq!(st.rank(), 3);
        assert_eq!(st.c1(), 1);
        assert_eq!(st.negate().degrees(), &[1, 0, -2]);
        assert_eq!(st.twist(1).degrees(), &[3, 1, 0]);
        assert_eq!(st.h0(0), 4); // 3 + 1 + 0
        assert_eq!(format!("{st}"), "O(2) ⊕ O(0) ⊕ O(-1)");
    }

    #[test]
    fn graded_map_validates_degrees() {
        let f = q();
        // entry of wrong degree rejected
        let bad = GradedMap::new(
            f,
            vec![1],
            vec![2],
            vec![vec![BinaryForm::one(f)]],
        );
        assert!(bad.is_err());
        let good = GradedMap::new(f, vec![1], vec![2], vec![vec![s_form(f)]]);
        assert!(good.is_ok());
    }

    fn two_variable_row(f: Rationals, a: i64, b: i64) -> GradedMap<Rationals> {
        // [s, t] : O(a)² → O(b) with b − a = 1
        assert_eq!(b - a, 1);
        GradedMap::row(f, vec![a, a], b, vec![s_form(f), t_form(f)]).unwrap()
    }

    #[test]
    fn koszul_kernel_via_syzygies() {
        let f = q();
        // [s, t] : O(1)² → O(2), kernel O(0) generated by (t, −s)
        let m = two_variable_row(f, 1, 2);
        let ker = m.syzygy_kernel(false).unwrap();
        assert_eq!(ker.splitting().degrees(), &[0]);
        let g: Vec<_> = (0..2).map(|j| ker.embedding().entry(j, 0).clone()).collect();
        let image = m.apply_twisted(0, &g).unwrap();
        assert!(image[0].is_zero());

        // [s, t] : O(0)² → O(1), kernel O(−1)
        let m = two_variable_row(f, 0, 1);
        let ker = m.syzygy_kernel(false).unwrap();
        assert_eq!(ker.splitting().degrees(), &[-1]);
    }

    #[test]
    fn koszul_kernel_via_section_counts() {
        let f = q();
        let m = two_variable_row(f, 1, 2);
        assert_eq!(m.kernel_splitting_via_h0().unwrap().degrees(), &[0]);
        let m = two_variable_row(f, 0, 1);
        assert_eq!(m.kernel_splitting_via_h0().unwrap().degrees(), &[-1]);
    }

    #[test]
    fn two_row_kernel() {
        let f = q();
        // rows [s t 0; 0 s t] : O(1)³ → O(2)², kernel O(−1) gen (t², −st, s²)
        let z = BinaryForm::zero(f);
        let m = GradedMap::new(
            f,
            vec![1, 1, 1],
            vec![2, 2],
            vec![
                vec![s_form(f), t_form(f), z.clone()],
                vec![z.clone(), s_form(f), t_form(f)],
            ],
        )
        .unwrap();
        let ker = m.syzygy_kernel(false).unwrap();
        assert_eq!(ker.splitting().degrees(), &[-1]);
        assert_eq!(m.kernel_splitting_via_h0().unwrap().degrees(), &[-1]);
        // embedding column is (t², −st, s²) up to scale
        let col: Vec<_> = (0..3).map(|j| ker.embedding().entry(j, 0).clone()).collect();
        let prod = m.apply_twisted(1, &col).unwrap();
        assert!(prod.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn non_surjective_map_is_rejected() {
        let f = q();
        // [s², st] : O(0)² → O(2) has the common zero s = 0
        let m = GradedMap::row(
            f,
            vec![0, 0],
            2,
            vec![s_form(f).mul(&s_form(f)), s_form(f).mul(&t_form(f))],
        )
        .unwrap();
        assert!(matches!(m.syzygy_kernel(false), Err(Error::NotSurjective)));
        assert!(matches!(m.kernel_splitting_via_h0(), Err(Error::NotSurjective)));
    }

    #[test]
    fn saturated_kernel_of_degenerate_row() {
        let f = q();
        // [s², st] : the kernel sheaf is generated by (t, −s) at twist 1,
        // a line subbundle O(−1) ⊂ O(0)².
        let m = GradedMap::row(
            f,
            vec![0, 0],
            2,
            vec![s_form(f).mul(&s_form(f)), s_form(f).mul(&t_form(f))],
        )
        .unwrap();
        let ker = m.syzygy_kernel(true).unwrap();
        assert_eq!(ker.splitting().degrees(), &[-1]);
    }

    #[test]
    fn determinant_of_forms() {
        let f = q();
        // det [s t; t s] = s² − t²
        let m = vec![
            vec![s_form(f), t_form(f)],
            vec![t_form(f), s_form(f)],
        ];
        let d = det_form(f, m);
        let expect = s_form(f).mul(&s_form(f)).sub(&t_form(f).mul(&t_form(f)));
        assert_eq!(d, expect);
        // singular matrix
        let m = vec![
            vec![s_form(f), t_form(f)],
            vec![s_form(f), t_form(f)],
        ];
        assert!(det_form(f, m).is_zero());
    }

    #[test]
    fn profile_reconstruction() {
        // degrees {2, 0, −3}: h(k) = (k+3)₊ + (k+1)₊ + (k−2)₊
        let h = |k: i64| dim_forms(2 + k) + dim_forms(k) + dim_forms(-3 + k);
        let st = splitting_from_h0_profile(3, -1, -4, h).unwrap();
        assert_eq!(st.degrees(), &[2, 0, -3]);
    }

    #[test]
    fn modification_of_known_bundle() {
        let f = q();
        let p = ProjectivePoint::from_i64(f, &[1, 0]).unwrap();
        let one = f.one();
        let zero = f.zero();
        // O(0) ⊕ O(−1), modified at one point
        let twists = vec![0, -1];
        // direction along the O(−1) summand: stays balanced
        let st = elementary_modification_splitting(
            f,
            &twists,
            &[ModificationDatum {
                point: p.clone(),
                direction: vec![zero.clone(), one.clone()],
            }],
        )
        .unwrap();
        assert_eq!(st.degrees(), &[0, 0]);
        // direction along the O(0) summand: splits off O(1)
        let st = elementary_modification_splitting(
            f,
            &twists,
            &[ModificationDatum {
                point: p.clone(),
                direction: vec![one.clone(), zero.clone()],
            }],
        )
        .unwrap();
        assert_eq!(st.degrees(), &[1, -1]);
        // generic direction: balanced
        let st = elementary_modification_splitting(
            f,
            &twists,
            &[ModificationDatum {
                point: p.clone(),
                direction: vec![one.clone(), one.clone()],
            }],
        )
        .unwrap();
        assert_eq!(st.degrees(), &[0, 0]);
        // duplicate points rejected
        let err = elementary_modification_splitting(
            f,
            &twists,
            &[
                ModificationDatum {
                    point: p.clone(),
                    direction: vec![one.clone(), zero.clone()],
                },
                ModificationDatum {
                    point: p,
                    direction: vec![zero.clone(), one.clone()],
                },
            ],
        );
        assert!(matches!(err, Err(Error::DuplicatePoint)));
    }

    #[test]
    fn modification_over_prime_field() {
        let f = PrimeField::new(101).unwrap();
        let p = ProjectivePoint::from_i64(f, &[2, 1]).unwrap();
        let st = elementary_modification_splitting(
            f,
            &[0, 0, -1],
            &[ModificationDatum {
                point: p,
                direction: vec![1, 1, 1],
            }],
        )
        .unwrap();
        assert_eq!(st.rank(), 3);
        assert_eq!(st.c1(), 0);
    }

    #[test]
    fn dual_quotient_of_euler_style_section() {
        let f = q();
        // Free module O(1)² with the nowhere-vanishing co-section (s, t):
        // the annihilator inside O(−1)² is O(−2), generated by (t, −s).
        let ker = dual_quotient_by_section(f, &[1, 1], &[s_form(f), t_form(f)]).unwrap();
        assert_eq!(ker.splitting().degrees(), &[-2]);
        // A vanishing section is rejected.
        let err = dual_quotient_by_section(
            f,
            &[1, 1],
            &[s_form(f), s_form(f)],
        );
        assert!(matches!(err, Err(Error::SectionVanishes)));
    }

    #[test]
    fn rewrite_ambient_sections() {
        let f = q();
        let m = two_variable_row(f, 1, 2);
        let ker = m.syzygy_kernel(false).unwrap();
        // (st, −s²) = s · generator (t, −s), twists [0], so at twist 1 the
        // module coordinate should be a degree-1 form.
        let sec = vec![
            s_form(f).mul(&t_form(f)),
            s_form(f).mul(&s_form(f)).neg(),
        ];
        let coords = ker.rewrite_ambient_section(1, &sec).unwrap();
        assert_eq!(coords.len(), 1);
        assert_eq!(coords[0].degree(), 1);
        let back = ker.embedding().apply_twisted(1, &coords).unwrap();
        for (a, b) in back.iter().zip(sec.iter()) {
            assert_eq!(a, b);
        }
        // a section outside the kernel cannot be rewritten
        let bad = vec![s_form(f).mul(&t_form(f)), BinaryForm::zero(f)];
        assert!(ker.rewrite_ambient_section(1, &bad).is_err());
    }

    #[test]
    fn global_sections_match_counts() {
        let f = q();
        let m = two_variable_row(f, 1, 2);
        let ker = m.syzygy_kernel(false).unwrap();
        assert_eq!(ker.h0(0), 1);
        assert_eq!(ker.h0(1), 2);
        assert_eq!(ker.global_sections(1).len(), 2);
        for sec in ker.global_sections(1) {
            let img = m.apply_twisted(1, &sec).unwrap();
            assert!(img.iter().all(|p| p.is_zero()));
        }
    }

    #[test]
    fn combinations_enumeration() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(combinations(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}

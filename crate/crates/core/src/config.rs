//! Configurations of lines with marked intersections, their Hilbert
//! functions, and linear systems of forms through parametrized curves.
//!
//! A configuration is a union of parametrized lines in projective space
//! together with explicit markings saying which pairs intersect and where.
//! Two section counts are computed by independent routes:
//!
//! * [`hilbert_structure`]: sections of `O(d)` on the union, as tuples of
//!   degree-`d` forms on the components glued at every marked point;
//! * [`hilbert_ideal`]: degree-`d` forms on the ambient space vanishing on
//!   every component, by intersecting the restriction conditions.
//!
//! When the restriction map from ambient forms to the union is surjective,
//! the two add up to the full space of degree-`d` forms.

use crate::binary::BinaryForm;
use crate::curve::RationalCurve;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{rank_of_span, Mat};
use crate::multi::{monomials, MultiForm};
use crate::point::ProjectivePoint;

/// A marked intersection: lines `i` and `j` meet at `point`.
#[derive(Clone, Debug)]
pub struct MarkedIntersection<K: Field> {
    pub i: usize,
    pub j: usize,
    pub point: ProjectivePoint<K>,
}

/// A union of parametrized lines with fully marked pairwise intersections:
/// every marked pair meets at its marked point, and every unmarked pair is
/// disjoint.
#[derive(Clone, Debug)]
pub struct LineConfiguration<K: Field> {
    field: K,
    n: usize,
    lines: Vec<RationalCurve<K>>,
    marks: Vec<MarkedIntersection<K>>,
}

/// Column spans of the coefficient matrix of a line.
fn line_span<K: Field>(c: &RationalCurve<K>) -> Vec<Vec<K::Elem>> {
    vec![
        c.components().iter().map(|f| f.coeff(0)).collect(),
        c.components().iter().map(|f| f.coeff(1)).collect(),
    ]
}

impl<K: Field> LineConfiguration<K> {
    /// Validate and build.  The marking must be complete: unmarked pairs of
    /// lines are checked disjoint, marked pairs must contain their point.
    pub fn new(
        field: K,
        n: usize,
        lines: Vec<RationalCurve<K>>,
        marks: Vec<MarkedIntersection<K>>,
    ) -> Result<Self> {
        for (idx, line) in lines.iter().enumerate() {
            if line.n() != n {
                return Err(Error::BadInput(format!(
                    "line {idx} lives in dimension {} but the configuration is in dimension {n}",
                    line.n()
                )));
            }
            if line.degree() != 1 {
                return Err(Error::BadInput(format!(
                    "component {idx} has degree {}; configurations are built from lines",
                    line.degree()
                )));
            }
        }
        let mut marked_pairs = std::collections::BTreeSet::new();
        for m in &marks {
            if m.i >= lines.len() || m.j >= lines.len() || m.i == m.j {
                return Err(Error::InconsistentMarking(format!(
                    "mark refers to an invalid line pair ({}, {})",
                    m.i, m.j
                )));
            }
            let key = (m.i.min(m.j), m.i.max(m.j));
            if !marked_pairs.insert(key) {
                return Err(Error::InconsistentMarking(format!(
                    "line pair ({}, {}) is marked twice",
                    key.0, key.1
                )));
            }
            for idx in [m.i, m.j] {
                if lines[idx].parameter_of_point(&m.point).is_err() {
                    return Err(Error::InconsistentMarking(format!(
                        "marked point of pair ({}, {}) does not lie on line {idx}",
                        m.i, m.j
                    )));
                }
            }
        }
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if marked_pairs.contains(&(i, j)) {
                    continue;
                }
                let mut vectors = line_span(&lines[i]);
                vectors.extend(line_span(&lines[j]));
                if rank_of_span(field, &vectors) < 4 {
                    return Err(Error::InconsistentMarking(format!(
                        "lines {i} and {j} intersect but carry no mark"
                    )));
                }
            }
        }
        Ok(LineConfiguration {
            field,
            n,
            lines,
            marks,
        })
    }

    pub fn field(&self) -> K {
        self.field
    }

    /// Dimension of the ambient projective space.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lines(&self) -> &[RationalCurve<K>] {
        &self.lines
    }

    pub fn marks(&self) -> &[MarkedIntersection<K>] {
        &self.marks
    }
}

/// Sections of `O(d)` on the union: tuples of degree-`d` forms on the
/// components that agree at every marked intersection, compared in the
/// fiber trivialization given by the canonical representative of the node.
pub fn hilbert_structure<K: Field>(config: &LineConfiguration<K>, d: i64) -> Result<usize> {
    if d < 1 {
        return Err(Error::OutOfRange("the twist must be at least 1".into()));
    }
    let field = config.field();
    let lines = config.lines();
    let per_line = (d + 1) as usize;
    let total = lines.len() * per_line;
    if total == 0 {
        return Ok(0);
    }
    let mut rows: Vec<Vec<K::Elem>> = Vec::new();
    for m in config.marks() {
        // For each side: the parameter hitting the node and the scale
        // relating the parametrization's representative to the canonical
        // one (the component at the node's pivot).
        let side = |idx: usize| -> Result<(Vec<K::Elem>, K::Elem)> {
            let t = lines[idx].parameter_of_point(&m.point)?;
            let image: Vec<K::Elem> = lines[idx]
                .components()
                .iter()
                .map(|f| f.eval_point(&t))
                .collect();
            let mu = image[m.point.pivot()].clone();
            let monos: Vec<K::Elem> = (0..per_line)
                .map(|w| BinaryForm::monomial(field, d as u32, w as u32).eval_point(&t))
                .collect();
            Ok((monos, mu))
        };
        let (mono_i, mu_i) = side(m.i)?;
        let (mono_j, mu_j) = side(m.j)?;
        // Condition: mu_j^d · sigma_i(t_i) − mu_i^d · sigma_j(t_j) = 0.
        let pow = |mu: &K::Elem| -> K::Elem {
            let mut acc = field.one();
            for _ in 0..d {
                acc = field.mul(&acc, mu);
            }
            acc
        };
        let ci = pow(&mu_j);
        let cj = field.neg(&pow(&mu_i));
        let mut row = vec![field.zero(); total];
        for (w, v) in mono_i.iter().enumerate() {
            row[m.i * per_line + w] = field.mul(&ci, v);
        }
        for (w, v) in mono_j.iter().enumerate() {
            row[m.j * per_line + w] = field.mul(&cj, v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(total);
    }
    Ok(total - Mat::from_rows(field, rows).rank())
}

/// Basis of the space of degree-`d` forms vanishing on every listed curve.
pub fn linear_system_through<K: Field>(
    field: K,
    n: usize,
    curves: &[RationalCurve<K>],
    degree: u32,
) -> Result<Vec<MultiForm<K>>> {
    if degree < 1 {
        return Err(Error::OutOfRange("the degree must be at least 1".into()));
    }
    for (idx, c) in curves.iter().enumerate() {
        if c.n() != n {
            return Err(Error::BadInput(format!(
                "curve {idx} lives in dimension {} but the system is in dimension {n}",
                c.n()
            )));
        }
    }
    let monos = monomials(n + 1, degree);
    let cols = monos.len();
    let mut rows: Vec<Vec<K::Elem>> = Vec::new();
    for c in curves {
        let restricted_degree = degree as i64 * c.degree();
        let mut curve_rows =
            vec![vec![field.zero(); cols]; restricted_degree as usize + 1];
        for (col, exp) in monos.iter().enumerate() {
            let mut mono = MultiForm::zero(field, n + 1, degree);
            mono.add_term(exp, field.one())?;
            let restricted = mono.compose(c.components());
            if restricted.is_zero() {
                continue;
            }
            for (w, row) in curve_rows.iter_mut().enumerate() {
                row[col] = restricted.coeff(w);
            }
        }
        rows.extend(curve_rows);
    }
    if rows.is_empty() {
        // No curves: the whole space of degree-d forms.
        return (0..cols)
            .map(|col| {
                let mut f = MultiForm::zero(field, n + 1, degree);
                f.add_term(&monos[col], field.one())?;
                Ok(f)
            })
            .collect();
    }
    let basis_vectors = Mat::from_rows(field, rows).nullspace();
    basis_vectors
        .into_iter()
        .map(|v| {
            let mut f = MultiForm::zero(field, n + 1, degree);
            for (col, c) in v.iter().enumerate() {
                if !field.is_zero(c) {
                    f.add_term(&monos[col], c.clone())?;
                }
            }
            Ok(f)
        })
        .collect()
}

/// Dimension of the space of degree-`d` forms vanishing on every line of
/// the configuration.
pub fn hilbert_ideal<K: Field>(config: &LineConfiguration<K>, d: u32) -> Result<usize> {
    Ok(linear_system_through(config.field(), config.n(), config.lines(), d)?.len())
}

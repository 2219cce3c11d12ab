//! A distinguished degree-`n` hypersurface in `Pⁿ` containing a standard
//! configuration of `n` lines, together with a verification battery that
//! re-derives every claimed property of the instance from scratch.
//!
//! The configuration: lines `L_1 … L_(n-1)` all pass through
//! `p = [1:0:…:0]` (with `L_i` spanned by `e_0, e_i`), and `L_n` (spanned
//! by `e_1, e_n`) meets `L_1` at `q = [0:1:0:…:0]`.
//!
//! The battery's claim records carry stable string ids (`"3.1"`,
//! `"3.2a"`, …, `"3.7(3)"`, `"L1-partials"`, `"Ln-partials"`); these ids
//! are a fixed external reporting interface and are treated as opaque
//! labels.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::binary::BinaryForm;
use crate::bundle::SplittingType;
use crate::config::{LineConfiguration, MarkedIntersection};
use crate::curve::{contains_curve, smooth_along_curve, CurveBundles, Hypersurface, RationalCurve};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::linalg::{rank_of_span, same_span};
use crate::multi::MultiForm;
use crate::point::ProjectivePoint;

/// Wrap an index into the window `1 ..= n-1`.
fn wrap(a: usize, n: usize) -> usize {
    ((a - 1) % (n - 1)) + 1
}

/// The defining form of the distinguished hypersurface: degree `n` in
/// `n + 1` variables, all coefficients `0` or `1`, so the construction is
/// field-independent.
///
/// The form is a sum of three groups:
/// * the leading term `x_0^(n-1) x_n`;
/// * an `x_n`-block `Σ_(k=2)^(n-1) x_1^(n-1-k) x_n^k v_k` with `v_2 = x_0`
///   and `v_k = x_k` for `k ≥ 3`;
/// * for each `m = 1 … n-1` a cyclic block
///   `Σ_(j=0)^(n-3) (Σ_(i=j)^(n-3) x_0^i x_m^(n-1-i)) x_wrap(m+1+j)`.
pub fn example_form<K: Field>(field: K, n: usize) -> Result<MultiForm<K>> {
    if n < 4 {
        return Err(Error::OutOfRange(
            "the construction needs ambient dimension at least 4".into(),
        ));
    }
    let one = field.one();
    let mut f = MultiForm::zero(field, n + 1, n as u32);
    let mut exp = vec![0u32; n + 1];
    exp[0] = (n - 1) as u32;
    exp[n] = 1;
    f.add_term(&exp, one.clone())?;
    for k in 2..=(n - 1) {
        let mut exp = vec![0u32; n + 1];
        exp[1] = (n - 1 - k) as u32;
        exp[n] = k as u32;
        let v = if k == 2 { 0 } else { k };
        exp[v] += 1;
        f.add_term(&exp, one.clone())?;
    }
    for m in 1..=(n - 1) {
        for j in 0..=(n - 3) {
            let trail = wrap(m + 1 + j, n);
            for i in j..=(n - 3) {
                let mut exp = vec![0u32; n + 1];
                exp[0] += i as u32;
                exp[m] += (n - 1 - i) as u32;
                exp[trail] += 1;
                f.add_term(&exp, one.clone())?;
            }
        }
    }
    Ok(f)
}

/// The hypersurface, its lines, and the two marked points.
#[derive(Clone, Debug)]
pub struct ExampleInstance<K: Field> {
    field: K,
    n: usize,
    hypersurface: Hypersurface<K>,
    lines: Vec<RationalCurve<K>>,
    p: ProjectivePoint<K>,
    q: ProjectivePoint<K>,
}

impl<K: Field> ExampleInstance<K> {
    pub fn field(&self) -> K {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hypersurface(&self) -> &Hypersurface<K> {
        &self.hypersurface
    }

    /// The lines in order; index `i - 1` holds the line `L_i`.
    pub fn lines(&self) -> &[RationalCurve<K>] {
        &self.lines
    }

    /// One-based access matching the `L_i` naming.
    pub fn line(&self, i: usize) -> &RationalCurve<K> {
        &self.lines[i - 1]
    }

    pub fn p(&self) -> &ProjectivePoint<K> {
        &self.p
    }

    pub fn q(&self) -> &ProjectivePoint<K> {
        &self.q
    }

    /// The union of the lines as a marked configuration: all pairs among
    /// `L_1 … L_(n-1)` meet at `p`, and `L_1` meets `L_n` at `q`.
    pub fn standard_configuration(&self) -> Result<LineConfiguration<K>> {
        let mut marks = Vec::new();
        for a in 0..self.n - 1 {
            for b in a + 1..self.n - 1 {
                marks.push(MarkedIntersection {
                    i: a,
                    j: b,
                    point: self.p.clone(),
                });
            }
        }
        marks.push(MarkedIntersection {
            i: 0,
            j: self.n - 1,
            point: self.q.clone(),
        });
        LineConfiguration::new(self.field, self.n, self.lines.clone(), marks)
    }
}

/// Build the instance for a given dimension and field.
pub fn build_example<K: Field>(field: K, n: usize) -> Result<ExampleInstance<K>> {
    let form = example_form(field, n)?;
    let hypersurface = Hypersurface::new(field, n, form)?;
    let axis_line = |a: usize, b: usize| -> Result<RationalCurve<K>> {
        let comps = (0..=n)
            .map(|i| {
                if i == a {
                    BinaryForm::var_s(field)
                } else if i == b {
                    BinaryForm::var_t(field)
                } else {
                    BinaryForm::zero(field)
                }
            })
            .collect();
        RationalCurve::new(field, comps)
    };
    let mut lines = Vec::with_capacity(n);
    for i in 1..=(n - 1) {
        lines.push(axis_line(0, i)?);
    }
    lines.push(axis_line(1, n)?);
    let mut p_coords = vec![0i64; n + 1];
    p_coords[0] = 1;
    let mut q_coords = vec![0i64; n + 1];
    q_coords[1] = 1;
    Ok(ExampleInstance {
        field,
        n,
        hypersurface,
        lines,
        p: ProjectivePoint::from_i64(field, &p_coords)?,
        q: ProjectivePoint::from_i64(field, &q_coords)?,
    })
}

/// Closed forms of the partial derivatives restricted to `L_1`, in the
/// parameters `(s, t) = (x_0, x_1)`.
pub fn expected_partials_on_l1<K: Field>(field: K, n: usize) -> Vec<BinaryForm<K>> {
    let d = (n - 1) as u32;
    (0..=n)
        .map(|j| match j {
            0 | 1 => BinaryForm::zero(field),
            j if j < n => {
                // Σ_(i=j-2)^(n-3) s^i t^(n-1-i)
                let mut acc = BinaryForm::zero(field);
                for i in (j - 2)..=(n - 3) {
                    acc = acc.add(&BinaryForm::monomial(field, d, (n - 1 - i) as u32));
                }
                acc
            }
            _ => BinaryForm::monomial(field, d, 0),
        })
        .collect()
}

/// Closed forms of the partial derivatives restricted to `L_n`, in the
/// parameters `(s, t) = (x_1, x_n)`.
pub fn expected_partials_on_ln<K: Field>(field: K, n: usize) -> Vec<BinaryForm<K>> {
    let d = (n - 1) as u32;
    (0..=n)
        .map(|j| match j {
            0 => BinaryForm::monomial(field, d, 2),
            2 => BinaryForm::monomial(field, d, 0),
            j if (3..n).contains(&j) => BinaryForm::monomial(field, d, j as u32),
            _ => BinaryForm::zero(field),
        })
        .collect()
}

/// The claim ids every verification report contains, in order.  The ids
/// are a fixed external reporting interface, treated as opaque labels.
pub const CLAIM_IDS: [&str; 18] = [
    "3.1", "3.2a", "3.2b", "3.2c", "3.3", "3.4", "L1-partials", "Ln-partials", "3.5(1)",
    "3.5(2)", "3.5(3)", "3.5(4)", "3.6(1)", "3.6(2)", "3.6(3)", "3.7(1)", "3.7(2)", "3.7(3)",
];

/// One verified claim.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClaimRecord {
    /// Stable opaque id of the claim in the external reporting interface.
    pub id: String,
    /// What was checked, as a self-contained statement.
    pub statement: String,
    pub pass: bool,
    /// Computed data backing the verdict.
    pub witness: serde_json::Value,
}

/// The full battery result for one instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub field: FieldSpec,
    pub claims: Vec<ClaimRecord>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failing_ids(&self) -> Vec<String> {
        self.claims
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.id.clone())
            .collect()
    }
}

/// Evaluate a fallible check into a (pass, witness) pair, turning errors
/// into recorded failures.
fn run_check(
    f: impl FnOnce() -> Result<(bool, serde_json::Value)>,
) -> (bool, serde_json::Value) {
    match f() {
        Ok(r) => r,
        Err(e) => (false, json!({ "error": e.to_string() })),
    }
}

/// Re-derive every claimed property of the instance.  Nothing is assumed:
/// incidence, smoothness, restricted partial derivatives, splitting types,
/// section-subbundle fibers, and the span conditions are all recomputed.
/// Failures are recorded in the report, never thrown.
pub fn verify_example<K: Field>(inst: &ExampleInstance<K>) -> VerificationReport {
    let field = inst.field();
    let n = inst.n();
    let x = inst.hypersurface();
    let fmt = |v: &[K::Elem]| -> Vec<String> { v.iter().map(|c| field.format_elem(c)).collect() };

    // The bundle pipeline and typicality report per line, built once.
    let bundles: Vec<std::result::Result<CurveBundles<K>, String>> = inst
        .lines()
        .iter()
        .map(|l| {
            CurveBundles::new(x.clone(), l.clone()).map_err(|e| e.to_string())
        })
        .collect();
    let bundle =
        |i: usize| -> Result<&CurveBundles<K>> {
            bundles[i - 1]
                .as_ref()
                .map_err(|e| Error::CheckFailed(format!("pipeline for L_{i}: {e}")))
        };
    // Parameter of an ambient point on line L_i.
    let param = |i: usize, pt: &ProjectivePoint<K>| -> Result<ProjectivePoint<K>> {
        inst.line(i).parameter_of_point(pt)
    };
    // Tangent direction of L_i at an ambient point (a vector independent of
    // the point itself).
    let tangent_dir = |i: usize, pt: &ProjectivePoint<K>| -> Result<Vec<K::Elem>> {
        let t = param(i, pt)?;
        Ok(inst.line(i).tangent_line_at(&t)?.1)
    };
    let unit = |j: usize| -> Vec<K::Elem> {
        (0..=n)
            .map(|i| if i == j { field.one() } else { field.zero() })
            .collect()
    };
    let expected_normal = {
        let mut v = vec![0i64; n - 3];
        v.push(-1);
        SplittingType::new(v)
    };

    let mut claims = Vec::new();
    let mut claim = |id: &str, statement: &str, outcome: (bool, serde_json::Value)| {
        claims.push(ClaimRecord {
            id: id.to_string(),
            statement: statement.to_string(),
            pass: outcome.0,
            witness: outcome.1,
        });
    };

    claim(
        "3.1",
        "each line of the standard configuration lies on the hypersurface",
        run_check(|| {
            let mut on = Vec::new();
            for l in inst.lines() {
                on.push(contains_curve(x, l)?);
            }
            Ok((on.iter().all(|&b| b), json!({ "on_hypersurface": on })))
        }),
    );

    claim(
        "3.2a",
        "the marked points p and q are smooth points of the hypersurface",
        run_check(|| {
            let sp = x.smooth_at(inst.p())?;
            let sq = x.smooth_at(inst.q())?;
            Ok((
                sp && sq,
                json!({
                    "gradient_at_p": fmt(&x.gradient_at(inst.p())?),
                    "gradient_at_q": fmt(&x.gradient_at(inst.q())?),
                }),
            ))
        }),
    );

    claim(
        "3.2b",
        "the tangent hyperplane at p is {x_n = 0} and is spanned by the lines through p",
        run_check(|| {
            let grad = x.gradient_at(inst.p())?;
            let expected = unit(n);
            let grad_ok = grad == expected;
            // Direction vectors of L_1 … L_(n-1): e_0 and e_i.
            let mut dirs = vec![unit(0)];
            for i in 1..n {
                dirs.push(unit(i));
            }
            let span_ok = rank_of_span(field, &dirs) == n
                && dirs.iter().all(|v| field.is_zero(&v[n]));
            Ok((
                grad_ok && span_ok,
                json!({ "gradient_at_p": fmt(&grad), "span_rank": rank_of_span(field, &dirs) }),
            ))
        }),
    );

    claim(
        "3.2c",
        "the tangent hyperplane at q is {x_2 = 0}",
        run_check(|| {
            let grad = x.gradient_at(inst.q())?;
            Ok((grad == unit(2), json!({ "gradient_at_q": fmt(&grad) })))
        }),
    );

    claim(
        "3.3",
        "the lines L_1 … L_(n-1) lie in the smooth locus of the hypersurface",
        run_check(|| {
            let mut ok = Vec::new();
            for i in 1..=(n - 1) {
                ok.push(smooth_along_curve(x, inst.line(i))?);
            }
            Ok((ok.iter().all(|&b| b), json!({ "smooth_along": ok })))
        }),
    );

    claim(
        "3.4",
        "the line L_n lies in the smooth locus of the hypersurface",
        run_check(|| {
            let ok = smooth_along_curve(x, inst.line(n))?;
            Ok((ok, json!({ "smooth_along": ok })))
        }),
    );

    let partial_check = |line: &RationalCurve<K>, expected: &[BinaryForm<K>]| {
        let mut all = true;
        let mut computed = Vec::new();
        for (j, exp) in expected.iter().enumerate() {
            let got = x.form().partial_derivative(j).compose(line.components());
            if &got != exp {
                all = false;
            }
            let coeffs: Vec<String> = if got.is_zero() {
                Vec::new()
            } else {
                (0..=got.degree() as usize)
                    .map(|w| field.format_elem(&got.coeff(w)))
                    .collect()
            };
            computed.push(coeffs);
        }
        (all, json!({ "restricted_partial_coefficients": computed }))
    };

    claim(
        "L1-partials",
        "the partial derivatives restricted to L_1 match their closed forms",
        run_check(|| Ok(partial_check(inst.line(1), &expected_partials_on_l1(field, n)))),
    );

    claim(
        "Ln-partials",
        "the partial derivatives restricted to L_n match their closed forms",
        run_check(|| Ok(partial_check(inst.line(n), &expected_partials_on_ln(field, n)))),
    );

    claim(
        "3.5(1)",
        "every line is typical: normal splitting O^(n-3) ⊕ O(-1), with the restricted-gradient span of corank one",
        run_check(|| {
            let mut all = true;
            let mut details = Vec::new();
            for i in 1..=n {
                let b = bundle(i)?;
                let report = b.is_typical()?;
                let corank = b.alpha_corank();
                let h0_conormal = b.h0_conormal_twisted(-1);
                let ok = report.typical
                    && report.normal_splitting == expected_normal
                    && corank == 1
                    && h0_conormal == 1;
                all &= ok;
                details.push(json!({
                    "line": i,
                    "normal": report.normal_splitting.degrees(),
                    "corank": corank,
                    "sections_of_twisted_conormal": h0_conormal,
                }));
            }
            Ok((all, json!({ "lines": details })))
        }),
    );

    claim(
        "3.5(2)",
        "for each line through p, the fiber at p of the section subbundle of its normal bundle is spanned by the stated consecutive coordinate differences",
        run_check(|| {
            let mut all = true;
            let mut details = Vec::new();
            for i in 1..=(n - 1) {
                let b = bundle(i)?;
                let t = param(i, inst.p())?;
                let trivial = b.normal_section_values_at(&t, 0);
                let mut claimed = Vec::new();
                for k in 1..=(n - 3) {
                    let a = wrap(i + k, n);
                    let c = wrap(i + k + 1, n);
                    let mut dir = unit(a);
                    let ec = unit(c);
                    for (d, e) in dir.iter_mut().zip(ec.iter()) {
                        *d = field.sub(d, e);
                    }
                    claimed.push(b.normal_class_at(&t, &dir)?);
                }
                let ok = same_span(field, &trivial, &claimed);
                all &= ok;
                details.push(json!({
                    "line": i,
                    "spans_match": ok,
                    "section_values": trivial.iter().map(|v| fmt(v)).collect::<Vec<_>>(),
                    "difference_classes": claimed.iter().map(|v| fmt(v)).collect::<Vec<_>>(),
                }));
            }
            Ok((all, json!({ "lines": details })))
        }),
    );

    let q_span_check = |i: usize| -> Result<(bool, serde_json::Value)> {
        let b = bundle(i)?;
        let t = param(i, inst.q())?;
        let trivial = b.normal_section_values_at(&t, 0);
        let mut claimed = Vec::new();
        for j in 3..=(n - 1) {
            claimed.push(b.normal_class_at(&t, &unit(j))?);
        }
        let ok = same_span(field, &trivial, &claimed);
        Ok((
            ok,
            json!({
                "line": i,
                "section_values": trivial.iter().map(|v| fmt(v)).collect::<Vec<_>>(),
                "coordinate_classes": claimed.iter().map(|v| fmt(v)).collect::<Vec<_>>(),
            }),
        ))
    };

    claim(
        "3.5(3)",
        "the fiber at q of the section subbundle of the normal bundle of L_1 is spanned by the classes of e_3 … e_(n-1)",
        run_check(|| q_span_check(1)),
    );

    claim(
        "3.5(4)",
        "the fiber at q of the section subbundle of the normal bundle of L_n is spanned by the classes of e_3 … e_(n-1)",
        run_check(|| q_span_check(n)),
    );

    claim(
        "3.6(1)",
        "L_1 and L_n are typical",
        run_check(|| {
            let a = bundle(1)?.is_typical()?;
            let b = bundle(n)?.is_typical()?;
            Ok((
                a.typical && b.typical,
                json!({
                    "L1_normal": a.normal_splitting.degrees(),
                    "Ln_normal": b.normal_splitting.degrees(),
                }),
            ))
        }),
    );

    claim(
        "3.6(2)",
        "the tangent direction of L_1 at q is not in the section subbundle of the normal bundle of L_n",
        run_check(|| {
            let dir = tangent_dir(1, inst.q())?;
            let t = param(n, inst.q())?;
            let inside = bundle(n)?.direction_in_trivial_subbundle(&t, &dir)?;
            Ok((!inside, json!({ "direction": fmt(&dir), "in_section_subbundle": inside })))
        }),
    );

    claim(
        "3.6(3)",
        "the tangent direction of L_n at q is not in the section subbundle of the normal bundle of L_1",
        run_check(|| {
            let dir = tangent_dir(n, inst.q())?;
            let t = param(1, inst.q())?;
            let inside = bundle(1)?.direction_in_trivial_subbundle(&t, &dir)?;
            Ok((!inside, json!({ "direction": fmt(&dir), "in_section_subbundle": inside })))
        }),
    );

    claim(
        "3.7(1)",
        "the lines L_2 … L_(n-2) are typical",
        run_check(|| {
            let mut all = true;
            let mut details = Vec::new();
            for i in 2..=(n - 2) {
                let r = bundle(i)?.is_typical()?;
                all &= r.typical;
                details.push(json!({ "line": i, "normal": r.normal_splitting.degrees() }));
            }
            Ok((all, json!({ "lines": details })))
        }),
    );

    claim(
        "3.7(2)",
        "the tangent direction of L_1 at p is not in the section subbundle of the normal bundle of L_i for 2 ≤ i ≤ n-1",
        run_check(|| {
            let dir = tangent_dir(1, inst.p())?;
            let mut all = true;
            let mut details = Vec::new();
            for i in 2..=(n - 1) {
                let t = param(i, inst.p())?;
                let inside = bundle(i)?.direction_in_trivial_subbundle(&t, &dir)?;
                all &= !inside;
                details.push(json!({ "line": i, "in_section_subbundle": inside }));
            }
            Ok((all, json!({ "direction": fmt(&dir), "lines": details })))
        }),
    );

    claim(
        "3.7(3)",
        "the tangent directions at p of L_2 … L_(n-1) span the fiber of the normal bundle of L_1 at p",
        run_check(|| {
            let b = bundle(1)?;
            let t = param(1, inst.p())?;
            let mut classes = Vec::new();
            for i in 2..=(n - 1) {
                let dir = tangent_dir(i, inst.p())?;
                classes.push(b.normal_class_at(&t, &dir)?);
            }
            let rank = rank_of_span(field, &classes);
            Ok((
                rank == n - 2,
                json!({
                    "rank": rank,
                    "fiber_dimension": n - 2,
                    "classes": classes.iter().map(|v| fmt(v)).collect::<Vec<_>>(),
                }),
            ))
        }),
    );

    VerificationReport {
        n,
        field: field.spec(),
        claims,
    }
}

//! Hypersurfaces, rational curves mapping to them, and the bundle pipeline
//! that computes splitting types of the restricted tangent and normal
//! bundles of such a curve.
//!
//! For a curve `f : P¹ → X ⊆ Pⁿ` on a hypersurface `X = {F = 0}` smooth
//! along the curve, the pipeline builds, in order:
//!
//! 1. the row map `φ = (∂₀F∘f, …, ∂ₙF∘f) : ⊕O(e)ⁿ⁺¹ → O(de)` and its
//!    kernel bundle, whose fiber at a parameter value is the affine tangent
//!    space of `X` at the image point;
//! 2. the coordinates `σ` of the tautological section `(f₀, …, fₙ)` inside
//!    that kernel, and the annihilator of `σ`, which is the pullback of the
//!    cotangent bundle of `X`;
//! 3. the projection of the cotangent module onto the cotangent line of the
//!    parameter curve, whose kernel is the conormal module of the curve.
//!
//! Twist sign convention: a module generator discovered at twist `k`
//! corresponds to a line-bundle summand `O(−k)`, and splitting types of the
//! tangent and normal bundles are the negated twists of their duals.

use serde::{Deserialize, Serialize};

use crate::binary::{gcd_many, BinaryForm};
use crate::bundle::{
    dual_quotient_by_section, elementary_modification_splitting, FreeGradedModule, GradedMap,
    ModificationDatum, SplittingType,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{in_span, rank_of_span, Mat};
use crate::multi::MultiForm;
use crate::point::ProjectivePoint;

/// A hypersurface in projective space, given by one nonzero homogeneous
/// form in `n + 1` variables.
#[derive(Clone, Debug)]
pub struct Hypersurface<K: Field> {
    field: K,
    n: usize,
    form: MultiForm<K>,
}

impl<K: Field> Hypersurface<K> {
    pub fn new(field: K, n: usize, form: MultiForm<K>) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadInput(
                "the ambient projective space must have dimension at least 2".into(),
            ));
        }
        if form.n_vars() != n + 1 {
            return Err(Error::BadInput(format!(
                "a hypersurface in {n}-dimensional projective space needs a form in {} variables, found {}",
                n + 1,
                form.n_vars()
            )));
        }
        if form.is_zero() {
            return Err(Error::BadInput("the defining form must be nonzero".into()));
        }
        if form.degree() == 0 {
            return Err(Error::BadInput(
                "the defining form must have positive degree".into(),
            ));
        }
        Ok(Hypersurface { field, n, form })
    }

    pub fn field(&self) -> K {
        self.field
    }

    /// Dimension of the ambient projective space.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    pub fn form(&self) -> &MultiForm<K> {
        &self.form
    }

    pub fn contains(&self, p: &ProjectivePoint<K>) -> Result<bool> {
        if p.ambient_dim() != self.n {
            return Err(Error::BadInput("point dimension mismatch".into()));
        }
        Ok(self.field.is_zero(&self.form.eval(p.coords())))
    }

    /// Values of all partial derivatives at a point.
    pub fn gradient_at(&self, p: &ProjectivePoint<K>) -> Result<Vec<K::Elem>> {
        if p.ambient_dim() != self.n {
            return Err(Error::BadInput("point dimension mismatch".into()));
        }
        Ok((0..=self.n)
            .map(|i| self.form.partial_derivative(i).eval(p.coords()))
            .collect())
    }

    /// Does the point lie on the hypersurface, with a nonvanishing gradient
    /// there?
    pub fn smooth_at(&self, p: &ProjectivePoint<K>) -> Result<bool> {
        if !self.contains(p)? {
            return Ok(false);
        }
        let grad = self.gradient_at(p)?;
        Ok(!grad.iter().all(|g| self.field.is_zero(g)))
    }

    /// The hypersurface defined by substituting `x_i ↦ Σ_j m[i][j] x_j`
    /// into the form.
    pub fn substitute(&self, m: &Mat<K>) -> Result<Self> {
        if m.rows() != self.n + 1 || m.cols() != self.n + 1 {
            return Err(Error::BadInput("substitution matrix dimension mismatch".into()));
        }
        let form = self.form.substitute_linear(m);
        Self::new(self.field, self.n, form)
    }
}

/// A nondegenerate parametrized rational curve in projective space: `n + 1`
/// binary forms of a common degree with no common factor.
#[derive(Clone, Debug)]
pub struct RationalCurve<K: Field> {
    field: K,
    n: usize,
    degree: i64,
    components: Vec<BinaryForm<K>>,
}

impl<K: Field> RationalCurve<K> {
    pub fn new(field: K, components: Vec<BinaryForm<K>>) -> Result<Self> {
        if components.len() < 3 {
            return Err(Error::BadInput(
                "a curve needs at least three components".into(),
            ));
        }
        let degree = components
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.degree())
            .max()
            .ok_or(Error::AllZero)?;
        for (i, c) in components.iter().enumerate() {
            if !c.is_zero() && c.degree() != degree {
                return Err(Error::BadInput(format!(
                    "component {i} has degree {} but the curve has degree {degree}",
                    c.degree()
                )));
            }
        }
        if degree == 0 {
            return Err(Error::BadInput(
                "constant maps are not parametrized curves".into(),
            ));
        }
        let g = gcd_many(&components)?;
        if g.degree() != 0 {
            return Err(Error::BadInput(
                "the components share a common factor; cancel it first".into(),
            ));
        }
        Ok(RationalCurve {
            field,
            n: components.len() - 1,
            degree,
            components,
        })
    }

    pub fn field(&self) -> K {
        self.field
    }

    /// Dimension of the ambient projective space.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn components(&self) -> &[BinaryForm<K>] {
        &self.components
    }

    /// Image of a parameter value.
    pub fn evaluate(&self, p: &ProjectivePoint<K>) -> Result<ProjectivePoint<K>> {
        if p.ambient_dim() != 1 {
            return Err(Error::BadInput(
                "curve parameters live on the projective line".into(),
            ));
        }
        let coords: Vec<K::Elem> = self.components.iter().map(|c| c.eval_point(p)).collect();
        ProjectivePoint::new(self.field, coords)
    }

    /// Componentwise derivatives with respect to the two parameters.
    pub fn jacobian(&self) -> (Vec<BinaryForm<K>>, Vec<BinaryForm<K>>) {
        (
            self.components.iter().map(|c| c.deriv_s()).collect(),
            self.components.iter().map(|c| c.deriv_t()).collect(),
        )
    }

    /// Is the parametrization an immersion?  At each parameter value the
    /// projective differential is nonzero exactly when the span of the
    /// image point and the two partial-derivative columns has dimension 2,
    /// so the criterion is that the 2×2 minors of the three column pairs
    /// have no common zero.  (Including the image-point column keeps the
    /// criterion correct when the characteristic divides the degree.)
    pub fn is_immersion(&self) -> bool {
        let (js, jt) = self.jacobian();
        let f = &self.components;
        let mut minors = Vec::new();
        let cols = [f.as_slice(), js.as_slice(), jt.as_slice()];
        for a in 0..3 {
            for b in a + 1..3 {
                for i in 0..f.len() {
                    for j in i + 1..f.len() {
                        let m = cols[a][i]
                            .mul(&cols[b][j])
                            .sub(&cols[a][j].mul(&cols[b][i]));
                        if !m.is_zero() {
                            minors.push(m);
                        }
                    }
                }
            }
        }
        match gcd_many(&minors) {
            Ok(g) => g.degree() == 0,
            Err(_) => false,
        }
    }

    /// The image point and an ambient tangent vector at a parameter value:
    /// together they span the embedded tangent line of the curve there.
    pub fn tangent_line_at(
        &self,
        p: &ProjectivePoint<K>,
    ) -> Result<(Vec<K::Elem>, Vec<K::Elem>)> {
        let x: Vec<K::Elem> = self.components.iter().map(|c| c.eval_point(p)).collect();
        if x.iter().all(|c| self.field.is_zero(c)) {
            return Err(Error::AllZero);
        }
        let (js, jt) = self.jacobian();
        for cand in [&js, &jt] {
            let v: Vec<K::Elem> = cand.iter().map(|c| c.eval_point(p)).collect();
            if rank_of_span(self.field, &[x.clone(), v.clone()]) == 2 {
                return Ok((x, v));
            }
        }
        Err(Error::NotImmersion)
    }

    /// Parameter value mapping to a given ambient point; implemented for
    /// lines, where the system is linear.
    pub fn parameter_of_point(&self, x: &ProjectivePoint<K>) -> Result<ProjectivePoint<K>> {
        if self.degree != 1 {
            return Err(Error::OutOfRange(
                "parameter recovery is implemented for lines only".into(),
            ));
        }
        if x.ambient_dim() != self.n {
            return Err(Error::BadInput("point dimension mismatch".into()));
        }
        let field = self.field;
        // f_i(s, t) = a_i s + b_i t; require f(s, t) ∥ x:
        // x_γ f_i − x_i f_γ = 0 for the pivot γ of x.
        let gamma = x.pivot();
        let xc = x.coords();
        let mut rows = Vec::new();
        for i in 0..=self.n {
            if i == gamma {
                continue;
            }
            let fi = &self.components[i];
            let fg = &self.components[gamma];
            let a = field.sub(
                &field.mul(&xc[gamma], &fi.coeff(0)),
                &field.mul(&xc[i], &fg.coeff(0)),
            );
            let b = field.sub(
                &field.mul(&xc[gamma], &fi.coeff(1)),
                &field.mul(&xc[i], &fg.coeff(1)),
            );
            rows.push(vec![a, b]);
        }
        let null = Mat::from_rows(field, rows).nullspace();
        match null.first() {
            Some(v) => ProjectivePoint::new(field, v.clone()),
            None => Err(Error::BadInput("the point does not lie on the line".into())),
        }
    }

    /// Precompose with an invertible change of parameters.
    pub fn reparametrize(&self, m: &[[K::Elem; 2]; 2]) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|c| c.reparametrize(m))
            .collect();
        Self::new(self.field, comps)
    }

    /// Postcompose with an ambient linear map: the curve with components
    /// `g_i = Σ_j m[i][j] f_j`.
    pub fn transform(&self, m: &Mat<K>) -> Result<Self> {
        if m.rows() != self.n + 1 || m.cols() != self.n + 1 {
            return Err(Error::BadInput("transform matrix dimension mismatch".into()));
        }
        let field = self.field;
        let comps: Vec<BinaryForm<K>> = (0..=self.n)
            .map(|i| {
                let mut acc = BinaryForm::zero(field);
                for (j, c) in self.components.iter().enumerate() {
                    let coeff = m.get(i, j);
                    if field.is_zero(coeff) || c.is_zero() {
                        continue;
                    }
                    acc = acc.add(&c.scale(coeff));
                }
                acc
            })
            .collect();
        Self::new(field, comps)
    }
}

/// Does the hypersurface contain the image of the curve?
pub fn contains_curve<K: Field>(x: &Hypersurface<K>, c: &RationalCurve<K>) -> Result<bool> {
    if x.n() != c.n() {
        return Err(Error::BadInput("ambient dimension mismatch".into()));
    }
    Ok(x.form().compose(c.components()).is_zero())
}

/// Is the hypersurface smooth at every point of the curve (over the
/// algebraic closure)?  Requires the curve to lie on the hypersurface; then
/// singular points along it are the common zeros of the composed partial
/// derivatives.
pub fn smooth_along_curve<K: Field>(x: &Hypersurface<K>, c: &RationalCurve<K>) -> Result<bool> {
    if !contains_curve(x, c)? {
        return Err(Error::CurveNotOnHypersurface);
    }
    let composed: Vec<BinaryForm<K>> = (0..=x.n())
        .map(|i| x.form().partial_derivative(i).compose(c.components()))
        .collect();
    match gcd_many(&composed) {
        Ok(g) => Ok(g.degree() == 0),
        Err(_) => Ok(false),
    }
}

/// Section counts of the conormal module at a few twists, kept for
/// reporting: pairs `(k, h⁰(N^∨(k)))`.
pub type SectionCounts = Vec<(i64, usize)>;

/// Result of the typicality test for a curve on a hypersurface of degree
/// equal to the ambient dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypicalityReport {
    /// Verdict: the normal splitting equals the expected one.
    pub typical: bool,
    /// Computed splitting type of the normal bundle.
    pub normal_splitting: SplittingType,
    /// Expected splitting type for a typical curve of this degree.
    pub expected: SplittingType,
    /// Conormal section counts used by the cohomological route.
    pub section_counts: SectionCounts,
}

/// The full bundle pipeline for one curve on one hypersurface.
pub struct CurveBundles<K: Field> {
    field: K,
    hypersurface: Hypersurface<K>,
    curve: RationalCurve<K>,
    /// Kernel of φ, embedded in `⊕O(e)ⁿ⁺¹`; fiberwise the affine tangent
    /// space of the hypersurface along the curve.
    kernel: FreeGradedModule<K>,
    /// Coordinates of the tautological section inside the kernel.
    sigma: Vec<BinaryForm<K>>,
    /// Pullback of the cotangent bundle, embedded in the dual of the kernel.
    cotangent: FreeGradedModule<K>,
    /// Projection of the cotangent module onto the cotangent line of the
    /// parameter curve, in the cotangent module's free frame.
    r_row: GradedMap<K>,
    /// Conormal module, embedded in the cotangent module's free frame.
    conormal: FreeGradedModule<K>,
    /// Composite embedding of the conormal module into the dual of the
    /// kernel: the conormal generators as functionals on tangent fibers.
    lambda: GradedMap<K>,
}

impl<K: Field> CurveBundles<K> {
    pub fn new(hypersurface: Hypersurface<K>, curve: RationalCurve<K>) -> Result<Self> {
        let field = hypersurface.field();
        let n = hypersurface.n();
        if curve.n() != n {
            return Err(Error::BadInput("ambient dimension mismatch".into()));
        }
        if n < 3 {
            return Err(Error::BadInput(
                "normal-bundle analysis needs ambient dimension at least 3".into(),
            ));
        }
        if !contains_curve(&hypersurface, &curve)? {
            return Err(Error::CurveNotOnHypersurface);
        }
        if !smooth_along_curve(&hypersurface, &curve)? {
            return Err(Error::SingularPoint);
        }
        if !curve.is_immersion() {
            return Err(Error::NotImmersion);
        }
        let e = curve.degree();
        let d = hypersurface.degree() as i64;

        // Step 1: φ and its kernel.
        let phi_entries: Vec<BinaryForm<K>> = (0..=n)
            .map(|i| {
                hypersurface
                    .form()
                    .partial_derivative(i)
                    .compose(curve.components())
            })
            .collect();
        let phi = GradedMap::row(field, vec![e; n + 1], d * e, phi_entries)?;
        let kernel = phi.syzygy_kernel(false)?;
        debug_assert_eq!(kernel.rank(), n);

        // Step 2: the tautological section and the cotangent module.
        let sigma = kernel.rewrite_ambient_section(0, curve.components())?;
        let cotangent = dual_quotient_by_section(field, kernel.twists(), &sigma)?;
        debug_assert_eq!(cotangent.rank(), n - 1);

        // Step 3: the conormal module.  The derivative columns of the curve
        // lie in the kernel; pairing them with the cotangent generators and
        // removing the parametrization factor gives the projection onto the
        // cotangent line of the parameter curve.
        let (js, jt) = curve.jacobian();
        let js_coords = kernel.rewrite_ambient_section(-1, &js)?;
        let jt_coords = kernel.rewrite_ambient_section(-1, &jt)?;
        let var_s = BinaryForm::var_s(field);
        let var_t = BinaryForm::var_t(field);
        let mut r_entries = Vec::with_capacity(cotangent.rank());
        for i in 0..cotangent.rank() {
            let w_col: Vec<BinaryForm<K>> = (0..kernel.rank())
                .map(|t| cotangent.embedding().entry(t, i).clone())
                .collect();
            let pair = |cols: &[BinaryForm<K>]| -> BinaryForm<K> {
                let mut acc = BinaryForm::zero(field);
                for (w, c) in w_col.iter().zip(cols.iter()) {
                    if w.is_zero() || c.is_zero() {
                        continue;
                    }
                    acc = acc.add(&w.mul(c));
                }
                acc
            };
            let psi_s = pair(&js_coords);
            let psi_t = pair(&jt_coords);
            // The two pairings assemble to a multiple of the tautological
            // relation, so s·ψ_s + t·ψ_t vanishes identically.
            let euler = var_s.mul(&psi_s).add(&var_t.mul(&psi_t));
            if !euler.is_zero() {
                return Err(Error::CheckFailed(
                    "derivative pairings violate the tautological relation".into(),
                ));
            }
            let r = if psi_s.is_zero() {
                BinaryForm::zero(field)
            } else {
                psi_s.divide_exact(&var_t).ok_or_else(|| {
                    Error::CheckFailed("derivative pairing is not divisible by the parameter".into())
                })?
            };
            // Consistency: ψ_t = −s·r.
            if psi_t.add(&var_s.mul(&r)) != BinaryForm::zero(field) {
                return Err(Error::CheckFailed(
                    "derivative pairings are inconsistent".into(),
                ));
            }
            r_entries.push(r);
        }
        let r_row = GradedMap::row(field, cotangent.twists().to_vec(), -2, r_entries)?;
        let conormal = r_row.syzygy_kernel(false).map_err(|e| match e {
            Error::NotSurjective => Error::CheckFailed(
                "conormal projection is not fiberwise surjective despite the immersion check"
                    .into(),
            ),
            other => other,
        })?;
        debug_assert_eq!(conormal.rank(), n - 2);
        let lambda = cotangent.embedding().compose(conormal.embedding())?;

        Ok(CurveBundles {
            field,
            hypersurface,
            curve,
            kernel,
            sigma,
            cotangent,
            r_row,
            conormal,
            lambda,
        })
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn hypersurface(&self) -> &Hypersurface<K> {
        &self.hypersurface
    }

    pub fn curve(&self) -> &RationalCurve<K> {
        &self.curve
    }

    pub fn kernel_module(&self) -> &FreeGradedModule<K> {
        &self.kernel
    }

    pub fn sigma(&self) -> &[BinaryForm<K>] {
        &self.sigma
    }

    pub fn cotangent_module(&self) -> &FreeGradedModule<K> {
        &self.cotangent
    }

    pub fn conormal_module(&self) -> &FreeGradedModule<K> {
        &self.conormal
    }

    pub fn conormal_projection(&self) -> &GradedMap<K> {
        &self.r_row
    }

    /// Splitting type of the kernel bundle of φ.
    pub fn kernel_splitting(&self) -> SplittingType {
        self.kernel.splitting()
    }

    /// Splitting type of the restriction of the tangent bundle of the
    /// hypersurface to the curve.
    pub fn tangent_splitting(&self) -> SplittingType {
        self.cotangent.splitting().negate()
    }

    /// Splitting type of the normal bundle of the curve in the
    /// hypersurface.
    pub fn normal_splitting(&self) -> SplittingType {
        self.conormal.splitting().negate()
    }

    /// Is the curve very free: every summand of the restricted tangent
    /// bundle has positive degree?
    pub fn is_very_free(&self) -> bool {
        self.tangent_splitting().all_at_least(1)
    }

    /// Corank of the span of the composed partial derivatives inside the
    /// space of forms of their degree: the ambient dimension minus the rank
    /// of the span.
    pub fn alpha_corank(&self) -> usize {
        let field = self.field;
        let n = self.hypersurface.n();
        let e = self.curve.degree();
        let d = self.hypersurface.degree() as i64;
        let deg = e * (d - 1);
        let rows: Vec<Vec<K::Elem>> = (0..=n)
            .map(|i| {
                let form = self
                    .hypersurface
                    .form()
                    .partial_derivative(i)
                    .compose(self.curve.components());
                let mut coeffs = vec![field.zero(); deg as usize + 1];
                if !form.is_zero() {
                    for (u, c) in coeffs.iter_mut().enumerate() {
                        *c = form.coeff(u);
                    }
                }
                coeffs
            })
            .collect();
        n - rank_of_span(field, &rows)
    }

    /// Number of independent sections of the twisted conormal sheaf,
    /// computed without the explicit conormal generators.
    pub fn h0_conormal_twisted(&self, k: i64) -> usize {
        self.r_row.h0_kernel(k)
    }

    /// Typicality test, for hypersurfaces of degree equal to the ambient
    /// dimension and curves of degree at most that dimension.
    ///
    /// Two routes are evaluated: the normal splitting is compared with the
    /// expected multiset, and the section counts of the twisted conormal
    /// sheaf are tested against the corresponding vanishing bounds.  The
    /// two are equivalent theorems, so any disagreement is an internal
    /// error.
    pub fn is_typical(&self) -> Result<TypicalityReport> {
        let n = self.hypersurface.n() as i64;
        let d = self.hypersurface.degree() as i64;
        let e = self.curve.degree();
        if d != n {
            return Err(Error::PreconditionFailed(
                "typicality is defined for hypersurfaces of degree equal to the ambient dimension"
                    .into(),
            ));
        }
        if e > n {
            return Err(Error::OutOfRange(
                "typicality is defined for curve degrees up to the ambient dimension".into(),
            ));
        }
        let expected = if e == 1 {
            let mut v = vec![0i64; (n - 3) as usize];
            v.push(-1);
            SplittingType::new(v)
        } else {
            let mut v = vec![1i64; (e - 2) as usize];
            v.extend(std::iter::repeat_n(0, (n - e) as usize));
            SplittingType::new(v)
        };
        let normal = self.normal_splitting();
        let splitting_route = normal == expected;
        let (counts, cohomology_route) = if e == 1 {
            let a = self.h0_conormal_twisted(-2);
            let b = self.h0_conormal_twisted(-1);
            (vec![(-2, a), (-1, b)], a == 0 && b <= 1)
        } else {
            let a = self.h0_conormal_twisted(-1);
            let b = self.h0_conormal_twisted(0);
            (vec![(-1, a), (0, b)], a == 0 && b as i64 <= n - e)
        };
        if splitting_route != cohomology_route {
            return Err(Error::CheckFailed(format!(
                "typicality routes disagree: splitting {normal} vs section counts {counts:?}"
            )));
        }
        Ok(TypicalityReport {
            typical: splitting_route,
            normal_splitting: normal,
            expected,
            section_counts: counts,
        })
    }

    /// Class of an ambient direction vector in the normal fiber at a
    /// parameter value, expressed in the frame dual to the conormal
    /// generators.  The vector must be tangent to the hypersurface at the
    /// image point.
    pub fn normal_class_at(
        &self,
        p: &ProjectivePoint<K>,
        direction: &[K::Elem],
    ) -> Result<Vec<K::Elem>> {
        let field = self.field;
        let n = self.hypersurface.n();
        if p.ambient_dim() != 1 {
            return Err(Error::BadInput(
                "curve parameters live on the projective line".into(),
            ));
        }
        if direction.len() != n + 1 {
            return Err(Error::BadInput("direction dimension mismatch".into()));
        }
        if direction.iter().all(|c| field.is_zero(c)) {
            return Err(Error::ZeroDirection);
        }
        let g = self.kernel.evaluate_at(p);
        let x_hat = g
            .solve(direction)
            .ok_or(Error::DirectionNotInTangentSpace)?;
        let lam = self.lambda.evaluate_at(p);
        // lam rows are kernel coordinates, columns conormal generators.
        let y: Vec<K::Elem> = (0..lam.cols())
            .map(|i| {
                let mut acc = field.zero();
                for t in 0..lam.rows() {
                    field.mul_add(&mut acc, lam.get(t, i), &x_hat[t]);
                }
                acc
            })
            .collect();
        Ok(y)
    }

    /// Twists of the normal module in its own frame order (dual to the
    /// conormal generators, unsorted).
    pub fn normal_frame_twists(&self) -> Vec<i64> {
        self.conormal.twists().iter().map(|c| -c).collect()
    }

    /// Values at a parameter point of a basis of the twist-`k` sections of
    /// the normal bundle, in the same frame as [`CurveBundles::normal_class_at`].
    pub fn normal_section_values_at(&self, p: &ProjectivePoint<K>, k: i64) -> Vec<Vec<K::Elem>> {
        let field = self.field;
        let twists = self.normal_frame_twists();
        let free = FreeGradedModule::free(field, twists);
        free.module_section_basis(k)
            .into_iter()
            .map(|tuple| tuple.iter().map(|f| f.eval_point(p)).collect())
            .collect()
    }

    /// Is the class of an ambient direction contained in the subbundle of
    /// the normal bundle generated by its global sections?  (When no
    /// summand has positive degree this subbundle is the maximal trivial
    /// direct summand.)  A direction tangent to the curve has zero class
    /// and is rejected.
    pub fn direction_in_trivial_subbundle(
        &self,
        p: &ProjectivePoint<K>,
        direction: &[K::Elem],
    ) -> Result<bool> {
        let y = self.normal_class_at(p, direction)?;
        if y.iter().all(|c| self.field.is_zero(c)) {
            return Err(Error::DirectionTangentToLine);
        }
        let values = self.normal_section_values_at(p, 0);
        Ok(in_span(self.field, &values, &y))
    }

    /// Splitting type of the elementary modification of the normal bundle
    /// at marked parameter points, in ambient directions.  Each direction
    /// is converted to its normal class first.
    pub fn modified_normal_splitting(
        &self,
        marks: &[(ProjectivePoint<K>, Vec<K::Elem>)],
    ) -> Result<SplittingType> {
        let twists = self.normal_frame_twists();
        let data = marks
            .iter()
            .map(|(p, dir)| {
                let y = self.normal_class_at(p, dir)?;
                if y.iter().all(|c| self.field.is_zero(c)) {
                    return Err(Error::DirectionTangentToLine);
                }
                Ok(ModificationDatum {
                    point: p.clone(),
                    direction: y,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        elementary_modification_splitting(self.field, &twists, &data)
    }
}

/// One node of a comb: a parameter on the handle and a parameter on the
/// corresponding tooth that map to the same ambient point.
#[derive(Clone, Debug)]
pub struct CombNode<K: Field> {
    pub handle_param: ProjectivePoint<K>,
    pub tooth_param: ProjectivePoint<K>,
}

/// Report on the gluing hypotheses for a comb with a given handle and
/// teeth, all lying on one hypersurface.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CombReport {
    /// Typicality verdict for the handle.
    pub handle_typical: bool,
    /// Typicality verdict for each tooth.
    pub teeth_typical: Vec<bool>,
    /// For each node: is the handle's tangent direction contained in the
    /// section subbundle of the tooth's normal bundle at the node?
    pub handle_dir_in_tooth_trivial: Vec<bool>,
    /// For each node: is the tooth's tangent direction contained in the
    /// section subbundle of the handle's normal bundle at the node?
    pub tooth_dir_in_handle_trivial: Vec<bool>,
    /// Pairwise disjointness of the teeth; only computed when every tooth
    /// is a line.
    pub teeth_disjoint: Option<bool>,
    /// When all nodes share one handle parameter: do the tooth tangent
    /// classes span the full normal fiber of the handle there?
    pub tooth_classes_span: Option<bool>,
    /// When the handle parameters are pairwise distinct: splitting type of
    /// the elementary modification of the handle's normal bundle at the
    /// nodes, in the tooth tangent directions.
    pub handle_modification: Option<SplittingType>,
    /// For each tooth: splitting type of the elementary modification of
    /// the tooth's normal bundle at its node, in the handle's tangent
    /// direction.
    pub tooth_modifications: Vec<SplittingType>,
}

/// Column spans of the coefficient matrix of a line, for disjointness
/// tests.
fn line_span<K: Field>(c: &RationalCurve<K>) -> Vec<Vec<K::Elem>> {
    vec![
        c.components().iter().map(|f| f.coeff(0)).collect(),
        c.components().iter().map(|f| f.coeff(1)).collect(),
    ]
}

/// Verify the gluing hypotheses of a comb: handle and teeth on the
/// hypersurface, transversal nodes, typicality of all components, the
/// direction conditions, and the resulting modifications.
pub fn comb_hypotheses<K: Field>(
    hypersurface: &Hypersurface<K>,
    handle: &RationalCurve<K>,
    teeth: &[RationalCurve<K>],
    nodes: &[CombNode<K>],
) -> Result<CombReport> {
    let field = hypersurface.field();
    if teeth.len() != nodes.len() {
        return Err(Error::BadInput(
            "one node is needed for each tooth".into(),
        ));
    }
    if teeth.is_empty() {
        return Err(Error::BadInput("a comb needs at least one tooth".into()));
    }
    let handle_bundles = CurveBundles::new(hypersurface.clone(), handle.clone())?;
    let teeth_bundles: Vec<CurveBundles<K>> = teeth
        .iter()
        .map(|t| CurveBundles::new(hypersurface.clone(), t.clone()))
        .collect::<Result<Vec<_>>>()?;

    // Node incidence and transversality.
    let mut handle_tangents: Vec<Vec<K::Elem>> = Vec::new();
    let mut tooth_tangents: Vec<Vec<K::Elem>> = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        let on_handle = handle.evaluate(&node.handle_param)?;
        let on_tooth = teeth[i].evaluate(&node.tooth_param)?;
        if on_handle != on_tooth {
            return Err(Error::InconsistentMarking(format!(
                "node {i}: handle and tooth parameters map to different points"
            )));
        }
        let (x, vh) = handle.tangent_line_at(&node.handle_param)?;
        let (_, vt) = teeth[i].tangent_line_at(&node.tooth_param)?;
        if rank_of_span(field, &[x.clone(), vh.clone(), vt.clone()]) < 3 {
            return Err(Error::NonTransversalNode(format!(
                "node {i}: handle and tooth share their tangent line"
            )));
        }
        handle_tangents.push(vh);
        tooth_tangents.push(vt);
    }

    let handle_typical = handle_bundles.is_typical()?.typical;
    let teeth_typical = teeth_bundles
        .iter()
        .map(|b| b.is_typical().map(|r| r.typical))
        .collect::<Result<Vec<_>>>()?;

    let mut handle_dir_in_tooth_trivial = Vec::new();
    let mut tooth_dir_in_handle_trivial = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        handle_dir_in_tooth_trivial.push(
            teeth_bundles[i]
                .direction_in_trivial_subbundle(&node.tooth_param, &handle_tangents[i])?,
        );
        tooth_dir_in_handle_trivial.push(
            handle_bundles
                .direction_in_trivial_subbundle(&node.handle_param, &tooth_tangents[i])?,
        );
    }

    let teeth_disjoint = if teeth.iter().all(|t| t.degree() == 1) {
        let mut disjoint = true;
        'outer: for i in 0..teeth.len() {
            for j in i + 1..teeth.len() {
                let mut vectors = line_span(&teeth[i]);
                vectors.extend(line_span(&teeth[j]));
                if rank_of_span(field, &vectors) < 4 {
                    disjoint = false;
                    break 'outer;
                }
            }
        }
        Some(disjoint)
    } else {
        None
    };

    let all_same = nodes
        .iter()
        .all(|n| n.handle_param == nodes[0].handle_param);
    let all_distinct = {
        let mut distinct = true;
        'outer: for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[i].handle_param == nodes[j].handle_param {
                    distinct = false;
                    break 'outer;
                }
            }
        }
        distinct
    };

    let tooth_classes_span = if all_same {
        let p = &nodes[0].handle_param;
        let classes: Vec<Vec<K::Elem>> = tooth_tangents
            .iter()
            .map(|v| handle_bundles.normal_class_at(p, v))
            .collect::<Result<Vec<_>>>()?;
        let rank = rank_of_span(field, &classes);
        Some(rank == handle_bundles.conormal_module().rank())
    } else {
        None
    };

    let handle_modification = if all_distinct {
        let marks: Vec<(ProjectivePoint<K>, Vec<K::Elem>)> = nodes
            .iter()
            .zip(tooth_tangents.iter())
            .map(|(n, v)| (n.handle_param.clone(), v.clone()))
            .collect();
        Some(handle_bundles.modified_normal_splitting(&marks)?)
    } else {
        None
    };

    let tooth_modifications = teeth_bundles
        .iter()
        .enumerate()
        .map(|(i, b)| {
            b.modified_normal_splitting(&[(
                nodes[i].tooth_param.clone(),
                handle_tangents[i].clone(),
            )])
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CombReport {
        handle_typical,
        teeth_typical,
        handle_dir_in_tooth_trivial,
        tooth_dir_in_handle_trivial,
        teeth_disjoint,
        tooth_classes_span,
        handle_modification,
        tooth_modifications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::multi::MultiForm;

    fn quadric_surface() -> (Hypersurface<Rationals>, RationalCurve<Rationals>) {
        // X: x0·x3 − x1·x2 = 0 in P³ (smooth), with the ruling line
        // (s, t, 0, 0).
        let q = Rationals;
        let mut f = MultiForm::zero(q, 4, 2);
        f.add_term(&[1, 0, 0, 1], q.from_i64(1)).unwrap();
        f.add_term(&[0, 1, 1, 0], q.from_i64(-1)).unwrap();
        let x = Hypersurface::new(q, 3, f).unwrap();
        let line = RationalCurve::new(
            q,
            vec![
                BinaryForm::var_s(q),
                BinaryForm::var_t(q),
                BinaryForm::zero(q),
                BinaryForm::zero(q),
            ],
        )
        .unwrap();
        (x, line)
    }

    #[test]
    fn line_on_quadric_surface() {
        let (x, line) = quadric_surface();
        assert!(contains_curve(&x, &line).unwrap());
        assert!(smooth_along_curve(&x, &line).unwrap());
        assert!(line.is_immersion());
        let b = CurveBundles::new(x, line).unwrap();
        // tangent bundle of a quadric surface restricted to a line of one
        // ruling: O(2) ⊕ O(0); normal bundle of the line: O(0).
        assert_eq!(b.tangent_splitting().degrees(), &[2, 0]);
        assert_eq!(b.normal_splitting().degrees(), &[0]);
        assert_eq!(b.kernel_splitting().c1(), 2);
        assert!(!b.is_very_free());
    }

    #[test]
    fn conic_on_quadric_surface_in_characteristic_two() {
        // Degree divisible by the characteristic: the tautological column
        // no longer lies in the span of the derivative columns, which
        // exercises the characteristic-aware immersion test.
        let f2 = PrimeField::new(2).unwrap();
        let mut f = MultiForm::zero(f2, 4, 2);
        f.add_term(&[1, 0, 1, 0], 1).unwrap(); // x0·x2
        f.add_term(&[0, 2, 0, 0], 1).unwrap(); // x1²  (−1 = 1)
        f.add_term(&[1, 0, 0, 1], 1).unwrap(); // x0·x3
        let x = Hypersurface::new(f2, 3, f).unwrap();
        let conic = RationalCurve::new(
            f2,
            vec![
                BinaryForm::monomial(f2, 2, 0),
                BinaryForm::monomial(f2, 2, 1),
                BinaryForm::monomial(f2, 2, 2),
                BinaryForm::zero(f2),
            ],
        )
        .unwrap();
        assert!(contains_curve(&x, &conic).unwrap());
        assert!(smooth_along_curve(&x, &conic).unwrap());
        assert!(conic.is_immersion());
        let b = CurveBundles::new(x, conic).unwrap();
        assert_eq!(b.tangent_splitting().rank(), 2);
        assert_eq!(b.tangent_splitting().c1(), 4);
        assert_eq!(b.normal_splitting().rank(), 1);
        assert_eq!(b.normal_splitting().c1(), 2);
    }

    #[test]
    fn frobenius_style_conic_is_not_an_immersion() {
        let f2 = PrimeField::new(2).unwrap();
        let conic = RationalCurve::new(
            f2,
            vec![
                BinaryForm::monomial(f2, 2, 0),
                BinaryForm::zero(f2),
                BinaryForm::monomial(f2, 2, 2),
                BinaryForm::zero(f2),
            ],
        )
        .unwrap();
        assert!(!conic.is_immersion());
    }

    #[test]
    fn line_on_fermat_style_cubic_surface() {
        // X: x0³ + x1³ + x2³ + x3³ = 0 over F₇ contains the line
        // (s, −s… ) use (s, t, −s, −t): sum = s³+t³−s³−t³ = 0.
        let f7 = PrimeField::new(7).unwrap();
        let mut f = MultiForm::zero(f7, 4, 3);
        for i in 0..4 {
            let mut exp = [0u32; 4];
            exp[i] = 3;
            f.add_term(&exp, 1).unwrap();
        }
        let x = Hypersurface::new(f7, 3, f).unwrap();
        let m1 = f7.from_i64(-1);
        let line = RationalCurve::new(
            f7,
            vec![
                BinaryForm::var_s(f7),
                BinaryForm::var_t(f7),
                BinaryForm::var_s(f7).scale(&m1),
                BinaryForm::var_t(f7).scale(&m1),
            ],
        )
        .unwrap();
        let b = CurveBundles::new(x, line).unwrap();
        // Lines on smooth cubic surfaces have normal bundle O(−1).
        assert_eq!(b.normal_splitting().degrees(), &[-1]);
        assert_eq!(b.tangent_splitting().degrees(), &[2, -1]);
    }

    #[test]
    fn curve_must_lie_on_the_hypersurface() {
        let (x, _) = quadric_surface();
        let q = Rationals;
        let line = RationalCurve::new(
            q,
            vec![
                BinaryForm::var_s(q),
                BinaryForm::zero(q),
                BinaryForm::zero(q),
                BinaryForm::var_t(q),
            ],
        )
        .unwrap();
        assert!(matches!(
            CurveBundles::new(x, line),
            Err(Error::CurveNotOnHypersurface)
        ));
    }

    #[test]
    fn singular_hypersurface_is_rejected() {
        // Cone over a conic: x0·x2 − x1² = 0 in P³ is singular at
        // [0:0:0:1]; the line (s, 0, 0, t) lies on it through the vertex.
        let q = Rationals;
        let mut f = MultiForm::zero(q, 4, 2);
        f.add_term(&[1, 0, 1, 0], q.from_i64(1)).unwrap();
        f.add_term(&[0, 2, 0, 0], q.from_i64(-1)).unwrap();
        let x = Hypersurface::new(q, 3, f).unwrap();
        let line = RationalCurve::new(
            q,
            vec![
                BinaryForm::var_s(q),
                BinaryForm::zero(q),
                BinaryForm::zero(q),
                BinaryForm::var_t(q),
            ],
        )
        .unwrap();
        assert!(matches!(
            CurveBundles::new(x, line),
            Err(Error::SingularPoint)
        ));
    }

    #[test]
    fn parameter_recovery_on_lines() {
        let q = Rationals;
        let line = RationalCurve::new(
            q,
            vec![
                BinaryForm::var_s(q),
                BinaryForm::var_t(q),
                BinaryForm::var_s(q).add(&BinaryForm::var_t(q)),
                BinaryForm::zero(q),
            ],
        )
        .unwrap();
        let x = ProjectivePoint::from_i64(q, &[1, 2, 3, 0]).unwrap();
        let p = line.parameter_of_point(&x).unwrap();
        assert_eq!(line.evaluate(&p).unwrap(), x);
        let off = ProjectivePoint::from_i64(q, &[1, 2, 4, 0]).unwrap();
        assert!(line.parameter_of_point(&off).is_err());
    }

    #[test]
    fn normal_classes_on_quadric_threefold() {
        // A smooth quadric in P⁴ containing the line (s, t, 0, 0, 0).
        let q = Rationals;
        let mut f = MultiForm::zero(q, 5, 2);
        f.add_term(&[1, 0, 0, 1, 0], q.from_i64(1)).unwrap(); // x0x3
        f.add_term(&[0, 1, 0, 0, 1], q.from_i64(1)).unwrap(); // x1x4
        f.add_term(&[0, 0, 2, 0, 0], q.from_i64(1)).unwrap(); // x2²
        let x = Hypersurface::new(q, 4, f).unwrap();
        let line = RationalCurve::new(
            q,
            vec![
                BinaryForm::var_s(q),
                BinaryForm::var_t(q),
                BinaryForm::zero(q),
                BinaryForm::zero(q),
                BinaryForm::zero(q),
            ],
        )
        .unwrap();
        let b = CurveBundles::new(x, line).unwrap();
        // N of a line on a smooth quadric threefold: O(1) ⊕ O(0).
        assert_eq!(b.normal_splitting().degrees(), &[1, 0]);
        let p = ProjectivePoint::from_i64(q, &[1, 0]).unwrap();
        // At the point (1, 0, 0, 0, 0), the tangent hyperplane of X is
        // x3 = 0; the direction e2 is tangent to X and not to the line.
        let e2: Vec<_> = (0..5).map(|i| q.from_i64(i64::from(i == 2))).collect();
        let y = b.normal_class_at(&p, &e2).unwrap();
        assert!(y.iter().any(|c| !q.is_zero(c)));
        // A direction along the line itself has zero class.
        let e1: Vec<_> = (0..5).map(|i| q.from_i64(i64::from(i == 1))).collect();
        let y = b.normal_class_at(&p, &e1).unwrap();
        assert!(y.iter().all(|c| q.is_zero(c)));
        // A direction off the tangent hyperplane is rejected.
        let e3: Vec<_> = (0..5).map(|i| q.from_i64(i64::from(i == 3))).collect();
        assert!(matches!(
            b.normal_class_at(&p, &e3),
            Err(Error::DirectionNotInTangentSpace)
        ));
    }
}

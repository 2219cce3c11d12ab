//! JSON data-transfer objects with exact string-encoded coefficients.
//!
//! Coefficients serialize as decimal strings (`"3"`, `"-4/7"`) so every
//! field round-trips exactly.  Each file-level object carries a
//! [`FieldSpec`] header; decoding happens against a concrete field handle,
//! chosen by the caller after reading the header.

use serde::{Deserialize, Serialize};

use crate::binary::BinaryForm;
use crate::config::{LineConfiguration, MarkedIntersection};
use crate::curve::{CombNode, Hypersurface, RationalCurve};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::multi::MultiForm;
use crate::point::ProjectivePoint;

/// One monomial of a multivariate form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDto {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

/// A homogeneous multivariate form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiFormDto {
    pub n_vars: usize,
    pub degree: u32,
    pub terms: Vec<TermDto>,
}

pub fn multi_form_to_dto<K: Field>(form: &MultiForm<K>) -> MultiFormDto {
    let field = form.field();
    MultiFormDto {
        n_vars: form.n_vars(),
        degree: form.degree(),
        terms: form
            .terms()
            .map(|(exp, c)| TermDto {
                exponents: exp.to_vec(),
                coefficient: field.format_elem(c),
            })
            .collect(),
    }
}

pub fn multi_form_from_dto<K: Field>(field: K, dto: &MultiFormDto) -> Result<MultiForm<K>> {
    let mut form = MultiForm::zero(field, dto.n_vars, dto.degree);
    for t in &dto.terms {
        form.add_term(&t.exponents, field.parse_elem(&t.coefficient)?)?;
    }
    Ok(form)
}

/// A binary form as its coefficient list on `s^(d-w) t^w`; the zero form is
/// the empty list.
pub type BinaryFormDto = Vec<String>;

pub fn binary_form_to_dto<K: Field>(form: &BinaryForm<K>) -> BinaryFormDto {
    if form.is_zero() {
        return Vec::new();
    }
    let field = form.field();
    (0..=form.degree() as usize)
        .map(|w| field.format_elem(&form.coeff(w)))
        .collect()
}

pub fn binary_form_from_dto<K: Field>(field: K, dto: &BinaryFormDto) -> Result<BinaryForm<K>> {
    let coeffs = dto
        .iter()
        .map(|s| field.parse_elem(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(BinaryForm::from_coeffs(field, coeffs))
}

/// A parametrized curve as its component coefficient lists.
pub type CurveDto = Vec<BinaryFormDto>;

pub fn curve_to_dto<K: Field>(curve: &RationalCurve<K>) -> CurveDto {
    curve.components().iter().map(binary_form_to_dto).collect()
}

pub fn curve_from_dto<K: Field>(field: K, dto: &CurveDto) -> Result<RationalCurve<K>> {
    let comps = dto
        .iter()
        .map(|c| binary_form_from_dto(field, c))
        .collect::<Result<Vec<_>>>()?;
    RationalCurve::new(field, comps)
}

/// A point as its coordinate strings.
pub type PointDto = Vec<String>;

pub fn point_to_dto<K: Field>(p: &ProjectivePoint<K>) -> PointDto {
    let field = p.field();
    p.coords().iter().map(|c| field.format_elem(c)).collect()
}

pub fn point_from_dto<K: Field>(field: K, dto: &PointDto) -> Result<ProjectivePoint<K>> {
    let coords = dto
        .iter()
        .map(|s| field.parse_elem(s))
        .collect::<Result<Vec<_>>>()?;
    ProjectivePoint::new(field, coords)
}

/// File-level hypersurface object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceFile {
    #[serde(flatten)]
    pub field: FieldSpec,
    pub n: usize,
    pub form: MultiFormDto,
}

pub fn hypersurface_to_file<K: Field>(x: &Hypersurface<K>) -> HypersurfaceFile {
    HypersurfaceFile {
        field: x.field().spec(),
        n: x.n(),
        form: multi_form_to_dto(x.form()),
    }
}

pub fn hypersurface_from_file<K: Field>(field: K, file: &HypersurfaceFile) -> Result<Hypersurface<K>> {
    Hypersurface::new(field, file.n, multi_form_from_dto(field, &file.form)?)
}

/// File-level curve object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    #[serde(flatten)]
    pub field: FieldSpec,
    pub components: CurveDto,
}

pub fn rational_curve_to_file<K: Field>(c: &RationalCurve<K>) -> CurveFile {
    CurveFile {
        field: c.field().spec(),
        components: curve_to_dto(c),
    }
}

pub fn rational_curve_from_file<K: Field>(field: K, file: &CurveFile) -> Result<RationalCurve<K>> {
    curve_from_dto(field, &file.components)
}

/// A marked intersection of two lines in a configuration file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkDto {
    pub i: usize,
    pub j: usize,
    pub point: PointDto,
}

/// File-level line-configuration object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationFile {
    #[serde(flatten)]
    pub field: FieldSpec,
    pub n: usize,
    pub lines: Vec<CurveDto>,
    pub marks: Vec<MarkDto>,
}

pub fn configuration_to_file<K: Field>(c: &LineConfiguration<K>) -> ConfigurationFile {
    ConfigurationFile {
        field: c.field().spec(),
        n: c.n(),
        lines: c.lines().iter().map(curve_to_dto).collect(),
        marks: c
            .marks()
            .iter()
            .map(|m| MarkDto {
                i: m.i,
                j: m.j,
                point: point_to_dto(&m.point),
            })
            .collect(),
    }
}

pub fn configuration_from_file<K: Field>(
    field: K,
    file: &ConfigurationFile,
) -> Result<LineConfiguration<K>> {
    let lines = file
        .lines
        .iter()
        .map(|l| curve_from_dto(field, l))
        .collect::<Result<Vec<_>>>()?;
    let marks = file
        .marks
        .iter()
        .map(|m| {
            Ok(MarkedIntersection {
                i: m.i,
                j: m.j,
                point: point_from_dto(field, &m.point)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    LineConfiguration::new(field, file.n, lines, marks)
}

/// One node of a comb in a comb file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombNodeDto {
    pub handle_param: PointDto,
    pub tooth_param: PointDto,
}

/// File-level comb object: hypersurface, handle, teeth, and nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombFile {
    #[serde(flatten)]
    pub field: FieldSpec,
    pub n: usize,
    pub form: MultiFormDto,
    pub handle: CurveDto,
    pub teeth: Vec<CurveDto>,
    pub nodes: Vec<CombNodeDto>,
}

pub struct CombInput<K: Field> {
    pub hypersurface: Hypersurface<K>,
    pub handle: RationalCurve<K>,
    pub teeth: Vec<RationalCurve<K>>,
    pub nodes: Vec<CombNode<K>>,
}

pub fn comb_from_file<K: Field>(field: K, file: &CombFile) -> Result<CombInput<K>> {
    Ok(CombInput {
        hypersurface: Hypersurface::new(field, file.n, multi_form_from_dto(field, &file.form)?)?,
        handle: curve_from_dto(field, &file.handle)?,
        teeth: file
            .teeth
            .iter()
            .map(|t| curve_from_dto(field, t))
            .collect::<Result<Vec<_>>>()?,
        nodes: file
            .nodes
            .iter()
            .map(|nd| {
                Ok(CombNode {
                    handle_param: point_from_dto(field, &nd.handle_param)?,
                    tooth_param: point_from_dto(field, &nd.tooth_param)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    })
}

/// Read a field header out of a JSON value that used `#[serde(flatten)]`.
pub fn field_spec_of_value(value: &serde_json::Value) -> Result<FieldSpec> {
    let spec: FieldSpec = serde_json::from_value(value.clone())
        .map_err(|e| Error::BadInput(format!("missing or malformed field header: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn hypersurface_round_trip() {
        let q = Rationals;
        let mut f = MultiForm::zero(q, 4, 2);
        f.add_term(&[1, 0, 0, 1], q.parse_elem("2/3").unwrap()).unwrap();
        f.add_term(&[0, 1, 1, 0], q.from_i64(-1)).unwrap();
        let x = Hypersurface::new(q, 3, f).unwrap();
        let file = hypersurface_to_file(&x);
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.contains("\"field\":\"Q\""));
        let back: HypersurfaceFile = serde_json::from_str(&text).unwrap();
        let y = hypersurface_from_file(q, &back).unwrap();
        assert_eq!(x.form(), y.form());
    }

    #[test]
    fn curve_round_trip_over_prime_field() {
        let f5 = PrimeField::new(5).unwrap();
        let c = RationalCurve::new(
            f5,
            vec![
                BinaryForm::monomial(f5, 2, 0),
                BinaryForm::monomial(f5, 2, 1),
                BinaryForm::monomial(f5, 2, 2),
                BinaryForm::zero(f5),
            ],
        )
        .unwrap();
        let file = rational_curve_to_file(&c);
        let text = serde_json::to_string(&file).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            field_spec_of_value(&v).unwrap(),
            FieldSpec::Prime { p: 5 }
        );
        let back: CurveFile = serde_json::from_str(&text).unwrap();
        let d = rational_curve_from_file(f5, &back).unwrap();
        assert_eq!(c.components(), d.components());
    }

    #[test]
    fn zero_component_serializes_as_empty_list() {
        let q = Rationals;
        assert!(binary_form_to_dto(&BinaryForm::<Rationals>::zero(q)).is_empty());
        let back = binary_form_from_dto(q, &Vec::new()).unwrap();
        assert!(back.is_zero());
    }
}

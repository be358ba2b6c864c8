//! Structure-preserving maps between directed complexes, their induced
//! action on cells, quasi-rigidity, and the explicit globe and equation
//! complexes with their projections.
//!
//! A morphism is stored by the images of the source basis elements; each
//! image is a nonnegative chain of the same dimension (or zero) in the
//! target, the boundary commutes, and the augmentation is preserved.
//! The induced map on cells rebuilds a cell from the mapped target
//! sides; quasi-rigidity is the decidable criterion under which atoms
//! map to atoms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::adc::{Adc, AdcError, RawAdc, validate_adc};
use crate::algebra::{BasisId, Chain, Coeff, GroupElement, Sign};
use crate::omega::{Cell, table_of_chain};
use crate::simplicial::{SimplicialError, oriental};

#[derive(Debug, thiserror::Error)]
pub enum MorphismError {
    #[error("bad index: {detail}")]
    BadIndex { detail: String },
    #[error("images must cover the source basis: expected {expected} entries, found {found}")]
    WrongImageCount { expected: usize, found: usize },
    #[error("image of `{id}` lives in a different complex than the declared target")]
    ForeignImage { id: String },
    #[error("unknown basis id `{id}` in the image table")]
    UnknownBasisId { id: String },
    #[error("image of `{id}` has a negative coefficient")]
    NegativeImage { id: String },
    #[error("image of `{id}` is not homogeneous of dimension {expected}")]
    DimensionMismatch { id: String, expected: usize },
    #[error("boundary does not commute with the map on `{id}`")]
    BoundaryMismatch { id: String },
    #[error("augmentation is not preserved on `{id}`")]
    AugmentationMismatch { id: String },
    #[error("morphisms do not compose: {detail}")]
    NotComposable { detail: String },
    #[error(transparent)]
    Complex(#[from] AdcError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// Wire form of a morphism: both complexes plus an id-keyed image table;
/// a missing or empty entry is the zero image.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawMorphism {
    pub source: RawAdc,
    pub target: RawAdc,
    pub images: BTreeMap<String, BTreeMap<String, i64>>,
}

/// A validated morphism of directed complexes.
#[derive(Clone, Debug)]
pub struct AdcMorphism {
    source: Adc,
    target: Adc,
    images: Vec<Chain>,
}

impl AdcMorphism {
    /// Validates dimension homogeneity, boundary commutation, and
    /// augmentation preservation; `images` is indexed like the source
    /// basis.
    pub fn new(source: Adc, target: Adc, images: Vec<Chain>) -> Result<AdcMorphism, MorphismError> {
        if images.len() != source.basis().len() {
            return Err(MorphismError::WrongImageCount {
                expected: source.basis().len(),
                found: images.len(),
            });
        }
        for (b, _) in source.basis().elements() {
            if !images[b.index()].basis().same(target.basis()) {
                return Err(MorphismError::ForeignImage {
                    id: source.basis().id_of(b).to_string(),
                });
            }
        }
        let f = AdcMorphism { source, target, images };
        for (b, elem) in f.source.basis().elements() {
            let image = f.image(b);
            if !image.is_zero()
                && !(image.group().is_homogeneous() && image.degree() == elem.dim as i64)
            {
                return Err(MorphismError::DimensionMismatch {
                    id: elem.id.clone(),
                    expected: elem.dim,
                });
            }
            if elem.dim == 0 {
                if f.target.aug_of(image.group()) != *f.source.aug(b) {
                    return Err(MorphismError::AugmentationMismatch { id: elem.id.clone() });
                }
            } else {
                let lhs = f.target.boundary_of(image.group());
                let rhs = f.apply_group(f.source.boundary(b));
                if lhs != rhs {
                    return Err(MorphismError::BoundaryMismatch { id: elem.id.clone() });
                }
            }
        }
        Ok(f)
    }

    pub fn source(&self) -> &Adc {
        &self.source
    }

    pub fn target(&self) -> &Adc {
        &self.target
    }

    pub fn image(&self, b: BasisId) -> &Chain {
        &self.images[b.index()]
    }

    /// Linear extension to arbitrary group elements.
    pub fn apply_group(&self, x: &GroupElement) -> GroupElement {
        let mut acc = GroupElement::zero(self.target.basis());
        for (b, coeff) in x.terms() {
            acc = acc.add(&self.image(b).group().scaled(coeff));
        }
        acc
    }

    /// Linear extension to chains; nonnegativity is preserved because
    /// every image is a chain.
    pub fn apply_chain(&self, x: &Chain) -> Chain {
        Chain::try_from_group(self.apply_group(x.group()))
            .expect("images of chains stay nonnegative")
    }

    /// The induced map on cells: the image of the top layer plus, level
    /// by level, the image of the target side corrected by the positive
    /// boundary of the layer above.
    pub fn apply_mu(&self, c: &Cell) -> Cell {
        let m = c.dim();
        let table = table_of_chain(&self.source, c);
        let mut acc = self.apply_chain(table.top()).into_group();
        for n in 0..m {
            let val = self.apply_chain(table.row(n, Sign::Plus));
            let above = self.apply_chain(table.row(n + 1, Sign::Plus));
            let (bplus, _) = self
                .target
                .boundary_pm(&above)
                .expect("the image of a homogeneous layer is homogeneous");
            acc = acc.add(val.group()).sub(bplus.group());
        }
        let chain =
            Chain::try_from_group(acc).expect("the induced map sends cells to cells");
        Cell::new(&self.target, chain, m).expect("the induced map preserves coherence")
    }

    /// Decidable criterion for atoms mapping to atoms: every nonzero
    /// image is a single basis element whose source and target sides
    /// stay disjoint at every level below.
    pub fn is_quasi_rigid(&self) -> bool {
        for (b, elem) in self.source.basis().elements() {
            let image = self.image(b);
            if image.is_zero() {
                continue;
            }
            if image.support_len() != 1 {
                return false;
            }
            let target_elem = image.support().next().expect("nonzero image");
            if image.coeff(target_elem) != Coeff::from(1) {
                return false;
            }
            for k in 0..elem.dim {
                let minus = self.apply_chain(&self.source.atom_side(b, k, Sign::Minus));
                let plus = self.apply_chain(&self.source.atom_side(b, k, Sign::Plus));
                if !minus.meet(&plus).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_raw(&self) -> RawMorphism {
        let mut images = BTreeMap::new();
        for (b, elem) in self.source.basis().elements() {
            let mut row = BTreeMap::new();
            for (t, coeff) in self.image(b).terms() {
                row.insert(
                    self.target.basis().id_of(t).to_string(),
                    i64::try_from(coeff).expect("coefficient fits the wire format"),
                );
            }
            images.insert(elem.id.clone(), row);
        }
        RawMorphism {
            source: self.source.to_raw(),
            target: self.target.to_raw(),
            images,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_raw()).expect("morphism serializes")
    }

    pub fn from_json(v: &Value) -> Result<AdcMorphism, MorphismError> {
        let raw: RawMorphism = serde_json::from_value(v.clone())
            .map_err(|err| MorphismError::BadIndex { detail: err.to_string() })?;
        validate_morphism(&raw)
    }
}

/// Builds and fully validates a morphism from its wire form.
pub fn validate_morphism(raw: &RawMorphism) -> Result<AdcMorphism, MorphismError> {
    let source = validate_adc(&raw.source)?;
    let target = validate_adc(&raw.target)?;
    for id in raw.images.keys() {
        if source.basis().lookup(id).is_none() {
            return Err(MorphismError::UnknownBasisId { id: id.clone() });
        }
    }
    let mut images = Vec::with_capacity(source.basis().len());
    for (_, elem) in source.basis().elements() {
        let mut terms = Vec::new();
        if let Some(row) = raw.images.get(&elem.id) {
            for (tid, &coeff) in row {
                let t = target
                    .basis()
                    .lookup(tid)
                    .ok_or_else(|| MorphismError::UnknownBasisId { id: tid.clone() })?;
                if coeff < 0 {
                    return Err(MorphismError::NegativeImage { id: elem.id.clone() });
                }
                terms.push((t, Coeff::from(coeff)));
            }
        }
        let group = GroupElement::from_terms(target.basis(), terms);
        images.push(Chain::try_from_group(group).expect("negative entries were rejected"));
    }
    AdcMorphism::new(source, target, images)
}

/// The identity morphism of a complex.
pub fn identity(k: &Adc) -> AdcMorphism {
    let images = k
        .basis()
        .ids()
        .map(|b| Chain::singleton(k.basis(), b))
        .collect();
    AdcMorphism::new(k.clone(), k.clone(), images).expect("the identity is a morphism")
}

/// The inclusion of a subcomplex, matching basis elements by id.
pub fn inclusion(sub: &Adc, sup: &Adc) -> Result<AdcMorphism, MorphismError> {
    let mut images = Vec::with_capacity(sub.basis().len());
    for (_, elem) in sub.basis().elements() {
        let t = sup
            .basis()
            .lookup(&elem.id)
            .ok_or_else(|| MorphismError::UnknownBasisId { id: elem.id.clone() })?;
        images.push(Chain::singleton(sup.basis(), t));
    }
    AdcMorphism::new(sub.clone(), sup.clone(), images)
}

/// Composition `g` after `f`; the complexes must be the same instances.
pub fn compose(g: &AdcMorphism, f: &AdcMorphism) -> Result<AdcMorphism, MorphismError> {
    if !f.target().same_complex(g.source()) {
        return Err(MorphismError::NotComposable {
            detail: "the target of the first map is not the source of the second".into(),
        });
    }
    let images = f.images.iter().map(|c| g.apply_chain(c)).collect();
    AdcMorphism::new(f.source.clone(), g.target.clone(), images)
}

/// The free complex on one `n`-dimensional globe: generators `ek-`,
/// `ek+` below the top `en`, each boundary the difference of the sides
/// one level down.
pub fn globe_adc(n: usize) -> Adc {
    let mut basis = Vec::new();
    let mut d: BTreeMap<String, BTreeMap<String, i64>> = BTreeMap::new();
    let mut e = BTreeMap::new();
    let side_ids = |k: usize| (format!("e{k}-"), format!("e{k}+"));
    let boundary_row = |k: usize| -> BTreeMap<String, i64> {
        let (minus, plus) = side_ids(k);
        BTreeMap::from([(plus, 1), (minus, -1)])
    };
    for k in 0..n {
        let (minus, plus) = side_ids(k);
        for id in [minus, plus] {
            basis.push(crate::algebra::BasisElement { id: id.clone(), dim: k });
            if k == 0 {
                e.insert(id, 1);
            } else {
                d.insert(id, boundary_row(k - 1));
            }
        }
    }
    let top = format!("e{n}");
    basis.push(crate::algebra::BasisElement { id: top.clone(), dim: n });
    if n == 0 {
        e.insert(top, 1);
    } else {
        d.insert(top, boundary_row(n - 1));
    }
    validate_adc(&RawAdc { basis, d, e }).expect("the globe complex is valid")
}

/// Positions removed from the full vertex set `0..=n` to reach the face
/// named by ascending digits.
fn removed_positions(n: usize, id: &str) -> Vec<usize> {
    let present: Vec<usize> = id
        .chars()
        .map(|c| c.to_digit(10).expect("simplex ids are digit strings") as usize)
        .collect();
    (0..=n).filter(|v| !present.contains(v)).collect()
}

/// Leading index of the weakly decreasing normal form of an iterated
/// face: removing ascending positions `j_1 < … < j_l` is the composite
/// whose first factor is `j_l - l + 1`.
fn leading_normal_index(removed: &[usize]) -> usize {
    removed.last().expect("nonempty removal") + 1 - removed.len()
}

/// The projection of the standard complex onto the globe: the top
/// simplex maps to the top globe generator, a face maps to the side
/// named by the leading normal index (+ for 0, - for 1, zero above).
pub fn projection_p(n: usize) -> Result<AdcMorphism, MorphismError> {
    if n == 0 {
        return Err(MorphismError::BadIndex {
            detail: "the globe projection needs n >= 1".into(),
        });
    }
    let (source, _top) = oriental(n)?;
    let target = globe_adc(n);
    let mut images = Vec::with_capacity(source.basis().len());
    for (_, elem) in source.basis().elements() {
        let removed = removed_positions(n, &elem.id);
        let image_id = if removed.is_empty() {
            Some(format!("e{n}"))
        } else {
            match leading_normal_index(&removed) {
                0 => Some(format!("e{}+", elem.dim)),
                1 => Some(format!("e{}-", elem.dim)),
                _ => None,
            }
        };
        images.push(match image_id {
            Some(id) => Chain::singleton(
                target.basis(),
                target.basis().require(&id).expect("globe ids are complete"),
            ),
            None => Chain::zero(target.basis()),
        });
    }
    AdcMorphism::new(source, target, images)
}

/// The free complex on one equation cell `y : f -> e * x` one level up:
/// three parallel `n`-generators over a shared boundary frame.
pub fn eq_adc(n: usize) -> Result<Adc, MorphismError> {
    if n == 0 {
        return Err(MorphismError::BadIndex {
            detail: "the equation complex needs n >= 1".into(),
        });
    }
    let mut basis = Vec::new();
    let mut d: BTreeMap<String, BTreeMap<String, i64>> = BTreeMap::new();
    let mut e = BTreeMap::new();
    let push = |basis: &mut Vec<crate::algebra::BasisElement>, id: &str, dim: usize| {
        basis.push(crate::algebra::BasisElement { id: id.to_string(), dim });
    };
    push(&mut basis, "y", n + 1);
    d.insert("y".into(), BTreeMap::from([("e".into(), 1), ("x".into(), 1), ("f".into(), -1)]));
    for id in ["f", "e", "x"] {
        push(&mut basis, id, n);
    }
    d.insert("f".into(), BTreeMap::from([("c".into(), 1), ("a".into(), -1)]));
    d.insert("e".into(), BTreeMap::from([("c".into(), 1), ("b".into(), -1)]));
    d.insert("x".into(), BTreeMap::from([("b".into(), 1), ("a".into(), -1)]));
    for id in ["a", "b", "c"] {
        push(&mut basis, id, n - 1);
        if n == 1 {
            e.insert(id.to_string(), 1);
        } else {
            d.insert(
                id.to_string(),
                BTreeMap::from([(format!("i{}+", n - 2), 1), (format!("i{}-", n - 2), -1)]),
            );
        }
    }
    for l in 0..n.saturating_sub(1) {
        for suffix in ["-", "+"] {
            let id = format!("i{l}{suffix}");
            push(&mut basis, &id, l);
            if l == 0 {
                e.insert(id, 1);
            } else {
                d.insert(
                    id,
                    BTreeMap::from([(format!("i{}+", l - 1), 1), (format!("i{}-", l - 1), -1)]),
                );
            }
        }
    }
    Ok(validate_adc(&RawAdc { basis, d, e })?)
}

/// The projection classifying the horn equation: the top simplex goes to
/// the equation cell, codimension-1 faces to the three `n`-generators,
/// codimension-2 faces to the frame, deeper faces to the shared tower.
pub fn morphism_q(n: usize) -> Result<AdcMorphism, MorphismError> {
    if n == 0 {
        return Err(MorphismError::BadIndex {
            detail: "the equation projection needs n >= 1".into(),
        });
    }
    let (source, _top) = oriental(n + 1)?;
    let target = eq_adc(n)?;
    let mut images = Vec::with_capacity(source.basis().len());
    for (_, elem) in source.basis().elements() {
        let removed = removed_positions(n + 1, &elem.id);
        let image_id: Option<String> = match removed.len() {
            0 => Some("y".into()),
            1 => match removed[0] {
                0 => Some("e".into()),
                1 => Some("f".into()),
                2 => Some("x".into()),
                _ => None,
            },
            2 => match (removed[1] - 1, removed[0]) {
                (0, 0) => Some("c".into()),
                (1, 0) => Some("b".into()),
                (1, 1) => Some("a".into()),
                _ => None,
            },
            l => match leading_normal_index(&removed) {
                0 => Some(format!("i{}+", n + 1 - l)),
                1 => Some(format!("i{}-", n + 1 - l)),
                _ => None,
            },
        };
        images.push(match image_id {
            Some(id) => Chain::singleton(
                target.basis(),
                target.basis().require(&id).expect("equation ids are complete"),
            ),
            None => Chain::zero(target.basis()),
        });
    }
    AdcMorphism::new(source, target, images)
}

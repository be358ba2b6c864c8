//! Sparse exact arithmetic over a graded basis.
//!
//! A [`Basis`] interns the generators of a free abelian group graded by
//! dimension. A [`GroupElement`] is a sparse integer combination of those
//! generators and a [`Chain`] is a combination with nonnegative
//! coefficients. Chains carry the pointwise lattice structure of the
//! coefficient order: [`Chain::meet`], [`Chain::join`] and the truncated
//! difference [`Chain::truncated_diff`].
//!
//! Handles are interned per basis; mixing elements of two different bases
//! in one operation is a programming error and panics. Coefficients are
//! arbitrary-precision integers internally; the JSON wire format restricts
//! them to the `i64` range.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{Map, Value};

/// Exact integer coefficient used throughout the crate.
pub type Coeff = BigInt;

/// Orientation tag: `Minus` selects sources, `Plus` selects targets.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Errors raised by basis construction and by parsing coefficient maps.
#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error("duplicate basis id `{id}`")]
    DuplicateId { id: String },
    #[error("unknown basis id `{id}`")]
    UnknownId { id: String },
    #[error("coefficient of `{id}` must be a nonnegative integer, got {value}")]
    NegativeCoefficient { id: String, value: String },
    #[error("expected a JSON object mapping basis ids to integers")]
    NotACoefficientMap,
    #[error("coefficient of `{id}` is not a JSON integer")]
    BadCoefficient { id: String },
}

/// A generator of the graded group: an identifier plus a dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct BasisElement {
    pub id: String,
    pub dim: usize,
}

/// Interned handle to a basis element.
///
/// Handles compare in the canonical order of the basis: by dimension
/// first, then lexicographically by id.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisId(u32);

impl BasisId {
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug)]
struct BasisInner {
    elems: Vec<BasisElement>,
    index: BTreeMap<String, BasisId>,
    max_dim: i64,
}

/// An interned graded basis. Clones share the same interning table, and
/// elements of different tables never mix.
#[derive(Clone, Debug)]
pub struct Basis {
    inner: Arc<BasisInner>,
}

impl Basis {
    /// Interns the given elements, sorted canonically by `(dim, id)`.
    /// Ids must be globally unique across dimensions.
    pub fn new(mut elems: Vec<BasisElement>) -> Result<Basis, AlgebraError> {
        elems.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));
        let mut index = BTreeMap::new();
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.id.clone(), BasisId(i as u32)).is_some() {
                return Err(AlgebraError::DuplicateId { id: e.id.clone() });
            }
        }
        let max_dim = elems.iter().map(|e| e.dim as i64).max().unwrap_or(-1);
        Ok(Basis {
            inner: Arc::new(BasisInner { elems, index, max_dim }),
        })
    }

    /// True when both bases intern the same element list. Clones share a
    /// table and compare by pointer; independently built but identical
    /// bases also count as the same, with aligned handles, because the
    /// element order is canonical.
    pub fn same(&self, other: &Basis) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.elems == other.inner.elems
    }

    pub fn len(&self) -> usize {
        self.inner.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.elems.is_empty()
    }

    /// Largest dimension present, `-1` for the empty basis.
    pub fn max_dim(&self) -> i64 {
        self.inner.max_dim
    }

    pub fn element(&self, b: BasisId) -> &BasisElement {
        &self.inner.elems[b.index()]
    }

    pub fn id_of(&self, b: BasisId) -> &str {
        &self.element(b).id
    }

    pub fn dim_of(&self, b: BasisId) -> usize {
        self.element(b).dim
    }

    pub fn lookup(&self, id: &str) -> Option<BasisId> {
        self.inner.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<BasisId, AlgebraError> {
        self.lookup(id).ok_or_else(|| AlgebraError::UnknownId { id: id.to_string() })
    }

    /// All handles in canonical order.
    pub fn ids(&self) -> impl Iterator<Item = BasisId> + '_ {
        (0..self.len() as u32).map(BasisId)
    }

    pub fn elements(&self) -> impl Iterator<Item = (BasisId, &BasisElement)> + '_ {
        self.inner.elems.iter().enumerate().map(|(i, e)| (BasisId(i as u32), e))
    }

    /// Handles of the given dimension, in canonical order.
    pub fn of_dim(&self, dim: usize) -> impl Iterator<Item = BasisId> + '_ {
        self.elements().filter(move |(_, e)| e.dim == dim).map(|(b, _)| b)
    }
}

fn assert_same_basis(x: &Basis, y: &Basis) {
    assert!(x.same(y), "operands belong to different complexes");
}

/// A sparse integer combination of basis elements. Zero coefficients are
/// never stored.
#[derive(Clone, Debug)]
pub struct GroupElement {
    basis: Basis,
    coeffs: BTreeMap<BasisId, Coeff>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.basis.same(&other.basis) && self.coeffs == other.coeffs
    }
}

impl Eq for GroupElement {}

impl GroupElement {
    pub fn zero(basis: &Basis) -> GroupElement {
        GroupElement { basis: basis.clone(), coeffs: BTreeMap::new() }
    }

    /// The generator `b` with coefficient one.
    pub fn singleton(basis: &Basis, b: BasisId) -> GroupElement {
        GroupElement::from_terms(basis, [(b, Coeff::one())])
    }

    /// Accumulates terms, merging duplicates and dropping zeros.
    pub fn from_terms(
        basis: &Basis,
        terms: impl IntoIterator<Item = (BasisId, Coeff)>,
    ) -> GroupElement {
        let mut coeffs: BTreeMap<BasisId, Coeff> = BTreeMap::new();
        for (b, c) in terms {
            assert!(b.index() < basis.len(), "basis handle out of range");
            let entry = coeffs.entry(b).or_insert_with(Coeff::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(&b);
            }
        }
        GroupElement { basis: basis.clone(), coeffs }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, b: BasisId) -> Coeff {
        self.coeffs.get(&b).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Terms in canonical `(dim, id)` order.
    pub fn terms(&self) -> impl Iterator<Item = (BasisId, &Coeff)> + '_ {
        self.coeffs.iter().map(|(b, c)| (*b, c))
    }

    pub fn support(&self) -> impl Iterator<Item = BasisId> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest dimension in the support, `-1` for zero.
    pub fn degree(&self) -> i64 {
        self.support().map(|b| self.basis.dim_of(b) as i64).max().unwrap_or(-1)
    }

    /// True when all support elements share one dimension (zero counts).
    pub fn is_homogeneous(&self) -> bool {
        let mut dims = self.support().map(|b| self.basis.dim_of(b));
        match dims.next() {
            None => true,
            Some(d) => dims.all(|x| x == d),
        }
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        combine(self, other, &Coeff::one(), &Coeff::one())
    }

    pub fn sub(&self, other: &GroupElement) -> GroupElement {
        combine(self, other, &Coeff::one(), &-Coeff::one())
    }

    pub fn scaled(&self, c: &Coeff) -> GroupElement {
        GroupElement::from_terms(&self.basis, self.terms().map(|(b, x)| (b, x * c)))
    }

    /// Serializes as an id-to-coefficient object with lexicographic keys.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (b, c) in self.terms() {
            let v = c.to_i64().expect("coefficient exceeds the i64 wire range");
            map.insert(self.basis.id_of(b).to_string(), Value::from(v));
        }
        Value::Object(map)
    }

    /// Parses an id-to-coefficient object against the given basis,
    /// dropping explicit zeros.
    pub fn from_json(basis: &Basis, v: &Value) -> Result<GroupElement, AlgebraError> {
        let obj = v.as_object().ok_or(AlgebraError::NotACoefficientMap)?;
        let mut terms = Vec::with_capacity(obj.len());
        for (id, val) in obj {
            let b = basis.require(id)?;
            let c = val
                .as_i64()
                .ok_or_else(|| AlgebraError::BadCoefficient { id: id.clone() })?;
            terms.push((b, Coeff::from(c)));
        }
        Ok(GroupElement::from_terms(basis, terms))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", self.basis.id_of(b))?;
        }
        Ok(())
    }
}

/// `cx*x + cy*y` over a shared basis.
pub fn combine(x: &GroupElement, y: &GroupElement, cx: &Coeff, cy: &Coeff) -> GroupElement {
    assert_same_basis(&x.basis, &y.basis);
    GroupElement::from_terms(
        &x.basis,
        x.terms()
            .map(|(b, c)| (b, c * cx))
            .chain(y.terms().map(|(b, c)| (b, c * cy))),
    )
}

/// Splits `x` into `(positive part, negative part)` with
/// `x = pos - neg` and disjoint supports.
pub fn split_parts(x: &GroupElement) -> (Chain, Chain) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (b, c) in x.terms() {
        if c.is_positive() {
            pos.push((b, c.clone()));
        } else {
            neg.push((b, -c.clone()));
        }
    }
    (
        Chain { elem: GroupElement::from_terms(&x.basis, pos) },
        Chain { elem: GroupElement::from_terms(&x.basis, neg) },
    )
}

/// A combination with nonnegative coefficients. The positivity invariant
/// is enforced at every constructor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    elem: GroupElement,
}

impl Chain {
    pub fn zero(basis: &Basis) -> Chain {
        Chain { elem: GroupElement::zero(basis) }
    }

    pub fn singleton(basis: &Basis, b: BasisId) -> Chain {
        Chain { elem: GroupElement::singleton(basis, b) }
    }

    /// Checks positivity of every coefficient.
    pub fn try_from_group(elem: GroupElement) -> Result<Chain, AlgebraError> {
        for (b, c) in elem.terms() {
            if c.is_negative() {
                return Err(AlgebraError::NegativeCoefficient {
                    id: elem.basis.id_of(b).to_string(),
                    value: c.to_string(),
                });
            }
        }
        Ok(Chain { elem })
    }

    pub fn group(&self) -> &GroupElement {
        &self.elem
    }

    pub fn into_group(self) -> GroupElement {
        self.elem
    }

    pub fn basis(&self) -> &Basis {
        &self.elem.basis
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    pub fn coeff(&self, b: BasisId) -> Coeff {
        self.elem.coeff(b)
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisId, &Coeff)> + '_ {
        self.elem.terms()
    }

    pub fn support(&self) -> impl Iterator<Item = BasisId> + '_ {
        self.elem.support()
    }

    pub fn support_len(&self) -> usize {
        self.elem.support_len()
    }

    pub fn contains(&self, b: BasisId) -> bool {
        self.elem.coeffs.contains_key(&b)
    }

    pub fn degree(&self) -> i64 {
        self.elem.degree()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.elem.is_homogeneous()
    }

    pub fn add(&self, other: &Chain) -> Chain {
        Chain { elem: self.elem.add(&other.elem) }
    }

    /// Pointwise minimum of coefficients.
    pub fn meet(&self, other: &Chain) -> Chain {
        assert_same_basis(self.basis(), other.basis());
        let terms = self
            .terms()
            .filter_map(|(b, c)| {
                let d = other.coeff(b);
                if d.is_zero() { None } else { Some((b, c.clone().min(d))) }
            })
            .collect::<Vec<_>>();
        Chain { elem: GroupElement::from_terms(self.basis(), terms) }
    }

    /// Pointwise maximum of coefficients.
    pub fn join(&self, other: &Chain) -> Chain {
        assert_same_basis(self.basis(), other.basis());
        let mut terms: BTreeMap<BasisId, Coeff> = BTreeMap::new();
        for (b, c) in self.terms().chain(other.terms()) {
            let entry = terms.entry(b).or_insert_with(Coeff::zero);
            if *entry < *c {
                *entry = c.clone();
            }
        }
        Chain { elem: GroupElement::from_terms(self.basis(), terms) }
    }

    /// Truncated difference: pointwise `max(self - other, 0)`.
    pub fn truncated_diff(&self, other: &Chain) -> Chain {
        assert_same_basis(self.basis(), other.basis());
        let terms = self
            .terms()
            .map(|(b, c)| (b, c - c.clone().min(other.coeff(b))))
            .collect::<Vec<_>>();
        Chain { elem: GroupElement::from_terms(self.basis(), terms) }
    }

    /// Pointwise comparison of coefficients.
    pub fn leq(&self, other: &Chain) -> bool {
        assert_same_basis(self.basis(), other.basis());
        self.terms().all(|(b, c)| *c <= other.coeff(b))
    }

    /// True when every coefficient is at most one.
    pub fn leq_one(&self) -> bool {
        self.terms().all(|(_, c)| c.is_one())
    }

    pub fn to_json(&self) -> Value {
        self.elem.to_json()
    }

    /// Parses an id-to-coefficient object, rejecting negative entries.
    pub fn from_json(basis: &Basis, v: &Value) -> Result<Chain, AlgebraError> {
        Chain::try_from_group(GroupElement::from_json(basis, v)?)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.elem.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_abc() -> Basis {
        Basis::new(vec![
            BasisElement { id: "a".into(), dim: 0 },
            BasisElement { id: "b".into(), dim: 0 },
            BasisElement { id: "c".into(), dim: 1 },
        ])
        .unwrap()
    }

    fn ge(basis: &Basis, pairs: &[(&str, i64)]) -> GroupElement {
        GroupElement::from_terms(
            basis,
            pairs.iter().map(|(id, c)| (basis.require(id).unwrap(), Coeff::from(*c))),
        )
    }

    fn ch(basis: &Basis, pairs: &[(&str, i64)]) -> Chain {
        Chain::try_from_group(ge(basis, pairs)).unwrap()
    }

    #[test]
    fn canonical_order_is_dim_then_id() {
        let basis = Basis::new(vec![
            BasisElement { id: "z".into(), dim: 0 },
            BasisElement { id: "a".into(), dim: 1 },
            BasisElement { id: "b".into(), dim: 0 },
        ])
        .unwrap();
        let ids: Vec<&str> = basis.ids().map(|b| basis.id_of(b)).collect();
        assert_eq!(ids, ["b", "z", "a"]);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err = Basis::new(vec![
            BasisElement { id: "a".into(), dim: 0 },
            BasisElement { id: "a".into(), dim: 1 },
        ])
        .unwrap_err();
        assert!(matches!(err, AlgebraError::DuplicateId { .. }));
    }

    #[test]
    fn combine_and_split() {
        let basis = basis_abc();
        let x = ge(&basis, &[("a", 2), ("c", 1)]);
        let y = ge(&basis, &[("a", 1), ("b", 4)]);
        let z = combine(&x, &y, &Coeff::from(1), &Coeff::from(-1));
        assert_eq!(z, ge(&basis, &[("a", 1), ("b", -4), ("c", 1)]));
        let (pos, neg) = split_parts(&z);
        assert_eq!(pos, ch(&basis, &[("a", 1), ("c", 1)]));
        assert_eq!(neg, ch(&basis, &[("b", 4)]));
    }

    #[test]
    fn lattice_ops() {
        let basis = basis_abc();
        let x = ch(&basis, &[("a", 3), ("b", 1)]);
        let y = ch(&basis, &[("a", 1), ("c", 2)]);
        assert_eq!(x.meet(&y), ch(&basis, &[("a", 1)]));
        assert_eq!(x.join(&y), ch(&basis, &[("a", 3), ("b", 1), ("c", 2)]));
        assert_eq!(x.truncated_diff(&y), ch(&basis, &[("a", 2), ("b", 1)]));
        assert_eq!(y.truncated_diff(&x), ch(&basis, &[("c", 2)]));
        assert!(x.meet(&y).leq(&x));
        assert!(!x.leq_one());
        assert!(ch(&basis, &[("a", 1), ("c", 1)]).leq_one());
    }

    #[test]
    fn truncated_diff_matches_pointwise_formula() {
        let basis = basis_abc();
        let x = ch(&basis, &[("a", 5), ("b", 2)]);
        let y = ch(&basis, &[("a", 2), ("b", 7), ("c", 1)]);
        let d = x.truncated_diff(&y);
        for b in basis.ids() {
            let expect = x.coeff(b) - x.coeff(b).min(y.coeff(b));
            assert_eq!(d.coeff(b), expect);
        }
    }

    #[test]
    fn degree_and_homogeneity() {
        let basis = basis_abc();
        assert_eq!(Chain::zero(&basis).degree(), -1);
        assert_eq!(ch(&basis, &[("a", 1)]).degree(), 0);
        assert_eq!(ch(&basis, &[("a", 1), ("c", 2)]).degree(), 1);
        assert!(ge(&basis, &[("a", 1), ("b", -1)]).is_homogeneous());
        assert!(!ge(&basis, &[("a", 1), ("c", 1)]).is_homogeneous());
    }

    #[test]
    fn json_round_trip() {
        let basis = basis_abc();
        let x = ch(&basis, &[("a", 2), ("c", 1)]);
        let v = x.to_json();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"a":2,"c":1}"#);
        assert_eq!(Chain::from_json(&basis, &v).unwrap(), x);
        assert!(Chain::from_json(&basis, &serde_json::json!({"a": -1})).is_err());
        assert!(Chain::from_json(&basis, &serde_json::json!({"zz": 1})).is_err());
        let zero = Chain::from_json(&basis, &serde_json::json!({"a": 0})).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    #[should_panic(expected = "different complexes")]
    fn cross_basis_mixing_panics() {
        let b1 = basis_abc();
        let b2 = Basis::new(vec![
            BasisElement { id: "a".into(), dim: 0 },
            BasisElement { id: "z".into(), dim: 1 },
        ])
        .unwrap();
        let x = ch(&b1, &[("a", 1)]);
        let y = ch(&b2, &[("a", 1)]);
        let _ = x.add(&y);
    }

    #[test]
    fn identical_bases_built_twice_interoperate() {
        let b1 = basis_abc();
        let b2 = basis_abc();
        assert!(b1.same(&b2));
        let x = ch(&b1, &[("a", 1)]);
        let y = ch(&b2, &[("a", 2)]);
        assert_eq!(x.add(&y), ch(&b1, &[("a", 3)]));
    }
}

//! Augmented directed complexes: a graded basis with a differential and an
//! augmentation, plus the combinatorial structure derived from them (atom
//! tables, unitarity, the level order relations and loop-freeness).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde_json::Value;

use crate::algebra::{
    AlgebraError, Basis, BasisElement, BasisId, Chain, Coeff, GroupElement, Sign, split_parts,
};
use crate::omega::SteinerTable;

/// Validation and lookup errors for complexes.
#[derive(Debug, thiserror::Error)]
pub enum AdcError {
    #[error("unknown basis id `{id}`")]
    UnknownBasisId { id: String },
    #[error("duplicate basis id `{id}`")]
    DuplicateBasisId { id: String },
    #[error("entry `{id}`: {detail}")]
    BadGrading { id: String, detail: String },
    #[error("boundary of the boundary of `{id}` is nonzero")]
    BoundarySquareNonzero { id: String },
    #[error("augmentation of the boundary of `{id}` is nonzero")]
    AugmentationNonzeroOnBoundary { id: String },
    #[error("operand is not homogeneous: {chain}")]
    NotHomogeneous { chain: String },
    #[error("coefficient of `{id}` is not a JSON integer")]
    BadCoefficient { id: String },
}

impl From<AlgebraError> for AdcError {
    fn from(e: AlgebraError) -> AdcError {
        match e {
            AlgebraError::DuplicateId { id } => AdcError::DuplicateBasisId { id },
            AlgebraError::UnknownId { id } => AdcError::UnknownBasisId { id },
            AlgebraError::NegativeCoefficient { id, value } => AdcError::BadGrading {
                id,
                detail: format!("coefficient {value} must be nonnegative"),
            },
            AlgebraError::NotACoefficientMap => AdcError::BadGrading {
                id: String::new(),
                detail: "expected an object of integer coefficients".into(),
            },
            AlgebraError::BadCoefficient { id } => AdcError::BadCoefficient { id },
        }
    }
}

/// Serde mirror of the on-disk complex format.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct RawAdc {
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub d: BTreeMap<String, BTreeMap<String, i64>>,
    #[serde(default)]
    pub e: BTreeMap<String, i64>,
}

#[derive(Debug)]
struct AdcInner {
    basis: Basis,
    diff: Vec<GroupElement>,
    aug: Vec<Coeff>,
}

/// A validated augmented directed complex. Cheap to clone; clones share
/// the interned basis, so their elements interoperate.
#[derive(Clone, Debug)]
pub struct Adc {
    inner: Arc<AdcInner>,
}

/// Checks grading, `d∘d = 0` and `e∘d = 0`, and resolves all ids.
pub fn validate_adc(raw: &RawAdc) -> Result<Adc, AdcError> {
    let basis = Basis::new(raw.basis.clone())?;
    let mut diff = vec![GroupElement::zero(&basis); basis.len()];
    let mut aug = vec![Coeff::zero(); basis.len()];

    for (id, entries) in &raw.d {
        let b = basis.require(id)?;
        let dim = basis.dim_of(b);
        if dim == 0 {
            return Err(AdcError::BadGrading {
                id: id.clone(),
                detail: "dimension-0 elements carry no differential".into(),
            });
        }
        let mut terms = Vec::with_capacity(entries.len());
        for (tid, c) in entries {
            let tb = basis.require(tid)?;
            if basis.dim_of(tb) + 1 != dim {
                return Err(AdcError::BadGrading {
                    id: id.clone(),
                    detail: format!(
                        "differential entry `{tid}` has dimension {}, expected {}",
                        basis.dim_of(tb),
                        dim - 1
                    ),
                });
            }
            terms.push((tb, Coeff::from(*c)));
        }
        diff[b.index()] = GroupElement::from_terms(&basis, terms);
    }

    for (id, value) in &raw.e {
        let b = basis.require(id)?;
        if basis.dim_of(b) != 0 {
            return Err(AdcError::BadGrading {
                id: id.clone(),
                detail: "augmentation is defined on dimension 0 only".into(),
            });
        }
        aug[b.index()] = Coeff::from(*value);
    }

    let adc = Adc { inner: Arc::new(AdcInner { basis, diff, aug }) };

    for (b, e) in adc.basis().elements() {
        if e.dim >= 2 && !adc.boundary_of(adc.boundary(b)).is_zero() {
            return Err(AdcError::BoundarySquareNonzero { id: e.id.clone() });
        }
        if e.dim == 1 && !adc.aug_of(adc.boundary(b)).is_zero() {
            return Err(AdcError::AugmentationNonzeroOnBoundary { id: e.id.clone() });
        }
    }
    Ok(adc)
}

impl Adc {
    pub fn basis(&self) -> &Basis {
        &self.inner.basis
    }

    /// True when both values describe one complex: a shared or identical
    /// basis with equal boundaries and augmentations.
    pub fn same_complex(&self, other: &Adc) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.basis().same(other.basis())
                && self.inner.diff == other.inner.diff
                && self.inner.aug == other.inner.aug)
    }

    pub fn max_dim(&self) -> i64 {
        self.basis().max_dim()
    }

    /// Differential of a generator (zero in dimension 0).
    pub fn boundary(&self, b: BasisId) -> &GroupElement {
        &self.inner.diff[b.index()]
    }

    /// Linear extension of the differential.
    pub fn boundary_of(&self, x: &GroupElement) -> GroupElement {
        assert!(self.basis().same(x.basis()), "operands belong to different complexes");
        let mut acc = GroupElement::zero(self.basis());
        for (b, c) in x.terms() {
            acc = acc.add(&self.boundary(b).scaled(c));
        }
        acc
    }

    /// Augmentation value of a generator (zero above dimension 0).
    pub fn aug(&self, b: BasisId) -> &Coeff {
        &self.inner.aug[b.index()]
    }

    /// Linear extension of the augmentation over the dimension-0 part.
    pub fn aug_of(&self, x: &GroupElement) -> Coeff {
        assert!(self.basis().same(x.basis()), "operands belong to different complexes");
        let mut acc = Coeff::zero();
        for (b, c) in x.terms() {
            if self.basis().dim_of(b) == 0 {
                acc += self.aug(b) * c;
            }
        }
        acc
    }

    /// `(target part, source part)` of the boundary of a homogeneous
    /// chain: the positive and negative parts of its differential.
    pub fn boundary_pm(&self, x: &Chain) -> Result<(Chain, Chain), AdcError> {
        if !x.is_homogeneous() {
            return Err(AdcError::NotHomogeneous { chain: x.to_string() });
        }
        let (plus, minus) = split_parts(&self.boundary_of(x.group()));
        Ok((plus, minus))
    }

    /// `k`-dimensional side of the atom of `b`: the generator itself at
    /// its own dimension, otherwise the iterated source/target of the
    /// boundary.
    pub fn atom_side(&self, b: BasisId, k: usize, sign: Sign) -> Chain {
        let mut row = Chain::singleton(self.basis(), b);
        let mut j = self.basis().dim_of(b);
        while j > k {
            let (plus, minus) = self.boundary_pm(&row).expect("atom rows are homogeneous");
            row = match sign {
                Sign::Plus => plus,
                Sign::Minus => minus,
            };
            j -= 1;
        }
        row
    }

    /// Full two-column table of the atom of `b`.
    pub fn atom_table(&self, b: BasisId) -> SteinerTable {
        let n = self.basis().dim_of(b);
        let minus = (0..=n).map(|k| self.atom_side(b, k, Sign::Minus)).collect();
        let plus = (0..=n).map(|k| self.atom_side(b, k, Sign::Plus)).collect();
        SteinerTable::new(self, minus, plus).expect("atom rows always form a table")
    }

    /// Checks that every atom is coherent: both dimension-0 sides of every
    /// generator must have augmentation one.
    pub fn is_unitary(&self) -> UnitaryReport {
        let mut violators = Vec::new();
        for (b, e) in self.basis().elements() {
            let minus = self.aug_of(self.atom_side(b, 0, Sign::Minus).group());
            let plus = self.aug_of(self.atom_side(b, 0, Sign::Plus).group());
            if !minus.is_one() || !plus.is_one() {
                violators.push(UnitaryViolation {
                    id: e.id.clone(),
                    minus_aug: minus.to_string(),
                    plus_aug: plus.to_string(),
                });
            }
        }
        UnitaryReport { violators }
    }

    /// Generator order at `level`: an edge `a -> b` whenever the
    /// level-`level` target side of `a`'s atom meets the source side of
    /// `b`'s atom. Only elements of dimension >= `level` participate and
    /// the diagonal is omitted (reflexive pairs are ignored downstream).
    pub fn order_relation(&self, level: usize) -> OrderRelation {
        let nodes: Vec<BasisId> =
            self.basis().ids().filter(|b| self.basis().dim_of(*b) >= level).collect();
        let minus_sides: BTreeMap<BasisId, Chain> = nodes
            .iter()
            .map(|&b| (b, self.atom_side(b, level, Sign::Minus)))
            .collect();
        let plus_sides: BTreeMap<BasisId, Chain> = nodes
            .iter()
            .map(|&b| (b, self.atom_side(b, level, Sign::Plus)))
            .collect();
        let mut edges = BTreeSet::new();
        for &a in &nodes {
            for &b in &nodes {
                if a != b && !minus_sides[&a].meet(&plus_sides[&b]).is_zero() {
                    edges.insert((a, b));
                }
            }
        }
        OrderRelation { level, nodes, edges }
    }

    /// Looks for a nontrivial cycle in the generator order of each level.
    pub fn is_loop_free(&self) -> LoopFreeReport {
        let top = self.max_dim();
        for level in 0..=top.max(0) as usize {
            let rel = self.order_relation(level);
            if let Some(cycle) = rel.find_cycle() {
                return LoopFreeReport {
                    witness: Some(LoopWitness {
                        level,
                        cycle: cycle.iter().map(|b| self.basis().id_of(*b).to_string()).collect(),
                    }),
                };
            }
        }
        LoopFreeReport { witness: None }
    }

    pub fn to_raw(&self) -> RawAdc {
        let basis = self.basis().elements().map(|(_, e)| e.clone()).collect();
        let mut d = BTreeMap::new();
        let mut e = BTreeMap::new();
        for (b, el) in self.basis().elements() {
            if el.dim > 0 {
                let bd = self.boundary(b);
                if !bd.is_zero() {
                    let entries = bd
                        .terms()
                        .map(|(t, c)| {
                            (
                                self.basis().id_of(t).to_string(),
                                c.to_i64().expect("coefficient exceeds the i64 wire range"),
                            )
                        })
                        .collect();
                    d.insert(el.id.clone(), entries);
                }
            } else if !self.aug(b).is_zero() {
                e.insert(
                    el.id.clone(),
                    self.aug(b).to_i64().expect("coefficient exceeds the i64 wire range"),
                );
            }
        }
        RawAdc { basis, d, e }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_raw()).expect("raw complex serializes")
    }

    pub fn from_json(v: &Value) -> Result<Adc, AdcError> {
        let raw: RawAdc = serde_json::from_value(v.clone()).map_err(|e| AdcError::BadGrading {
            id: String::new(),
            detail: format!("malformed complex JSON: {e}"),
        })?;
        validate_adc(&raw)
    }
}

/// Unitarity check result; empty `violators` means the basis is unitary.
#[derive(Clone, Debug, serde::Serialize)]
pub struct UnitaryReport {
    pub violators: Vec<UnitaryViolation>,
}

impl UnitaryReport {
    pub fn ok(&self) -> bool {
        self.violators.is_empty()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct UnitaryViolation {
    pub id: String,
    pub minus_aug: String,
    pub plus_aug: String,
}

/// The generator order at one level, with edges on handles.
#[derive(Clone, Debug)]
pub struct OrderRelation {
    level: usize,
    nodes: Vec<BasisId>,
    edges: BTreeSet<(BasisId, BasisId)>,
}

impl OrderRelation {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn nodes(&self) -> &[BasisId] {
        &self.nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (BasisId, BasisId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: BasisId, b: BasisId) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn successors(&self, a: BasisId) -> impl Iterator<Item = BasisId> + '_ {
        self.edges.iter().filter(move |(x, _)| *x == a).map(|(_, b)| *b)
    }

    /// Every node reachable from `a` along one or more edges.
    pub fn reachable_from(&self, a: BasisId) -> BTreeSet<BasisId> {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<BasisId> = self.successors(a).collect();
        while let Some(x) = queue.pop_front() {
            if seen.insert(x) {
                queue.extend(self.successors(x));
            }
        }
        seen
    }

    /// Reflexive-transitive closure query.
    pub fn related(&self, a: BasisId, b: BasisId) -> bool {
        a == b || self.reachable_from(a).contains(&b)
    }

    /// A directed cycle on two or more nodes, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<BasisId>> {
        let mut graph: DiGraph<BasisId, ()> = DiGraph::new();
        let mut index: BTreeMap<BasisId, NodeIndex> = BTreeMap::new();
        for &b in &self.nodes {
            index.insert(b, graph.add_node(b));
        }
        for &(a, b) in &self.edges {
            graph.add_edge(index[&a], index[&b], ());
        }
        for comp in tarjan_scc(&graph) {
            if comp.len() < 2 {
                continue;
            }
            let members: BTreeSet<NodeIndex> = comp.iter().copied().collect();
            let start = *comp.iter().min_by_key(|ix| graph[**ix]).expect("nonempty");
            // BFS back to `start` inside the component yields a concrete cycle.
            let mut pred: BTreeMap<NodeIndex, NodeIndex> = BTreeMap::new();
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in graph.neighbors(u) {
                    if !members.contains(&v) {
                        continue;
                    }
                    if v == start {
                        let mut path = vec![graph[u]];
                        let mut cur = u;
                        while cur != start {
                            cur = pred[&cur];
                            path.push(graph[cur]);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    if let std::collections::btree_map::Entry::Vacant(e) = pred.entry(v) {
                        e.insert(u);
                        queue.push_back(v);
                    }
                }
            }
        }
        None
    }

    pub fn to_json(&self, basis: &Basis) -> Value {
        serde_json::json!({
            "level": self.level,
            "edges": self
                .edges
                .iter()
                .map(|(a, b)| vec![basis.id_of(*a).to_string(), basis.id_of(*b).to_string()])
                .collect::<Vec<_>>(),
        })
    }
}

/// Loop-freeness check result; `witness` carries the first offending
/// cycle (level plus the node ids in cyclic order).
#[derive(Clone, Debug, serde::Serialize)]
pub struct LoopFreeReport {
    pub witness: Option<LoopWitness>,
}

impl LoopFreeReport {
    pub fn ok(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct LoopWitness {
    pub level: usize,
    pub cycle: Vec<String>,
}

//! Horn factorizations of the outer faces of a standard complex, the
//! equation they satisfy, and vertex-support checks on the factors.
//!
//! For the standard complex on `0..=n` and a distinguished face index
//! `i`, the outer boundary side that contains the `i`-th face splits,
//! level by level, into a family `(a_k, gamma_k, b_k)` with
//! `gamma_{k+1} = a_k *_{k-1} gamma_k *_{k-1} b_k` and `gamma_1` the
//! `i`-th face itself. The side factors stay inside the horn, so the
//! family turns horn data into an equation for the missing face.

use std::collections::BTreeSet;

use serde_json::Value;

use crate::adc::Adc;
use crate::algebra::{Chain, Sign};
use crate::chain_calculus::comp_degree;
use crate::decomposition::{DecompError, decompose_once};
use crate::omega::{Cell, OmegaError, cell_compose};
use crate::simplicial::{RegularSimplicialSet, SimplicialError, oriental, standard};

#[derive(Debug, thiserror::Error)]
pub enum HornError {
    #[error("bad index: {detail}")]
    BadIndex { detail: String },
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Decomposition(#[from] DecompError),
    #[error(transparent)]
    Omega(#[from] OmegaError),
}

/// One level of the factorization: `gamma` isolates the distinguished
/// face between the side composites `a` and `b` at level `k - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HornLevel {
    pub k: usize,
    pub a: Cell,
    pub gamma: Cell,
    pub b: Cell,
}

/// The full family for levels `k = 1..n-1`, all cells of dimension
/// `n - 1`; `alpha` is the boundary side holding the `i`-th face.
#[derive(Clone, Debug, PartialEq)]
pub struct HornFactorization {
    pub n: usize,
    pub i: usize,
    pub alpha: Sign,
    pub levels: Vec<HornLevel>,
}

impl HornFactorization {
    pub fn level(&self, k: usize) -> &HornLevel {
        &self.levels[k - 1]
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "n": self.n,
            "i": self.i,
            "alpha": self.alpha.symbol().to_string(),
            "levels": self
                .levels
                .iter()
                .map(|l| {
                    serde_json::json!({
                        "k": l.k,
                        "a": l.a.chain().to_json(),
                        "gamma": l.gamma.chain().to_json(),
                        "b": l.b.chain().to_json(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// Ascending digits of the face of `0..=n` opposite position `i`.
pub fn outer_face_id(n: usize, i: usize) -> String {
    (0..=n).filter(|&v| v != i).map(|v| v.to_string()).collect()
}

/// The boundary side of the top cell that contains face `i`: the target
/// for even `i`, the source for odd `i`.
pub fn outer_sign(i: usize) -> Sign {
    if i.is_multiple_of(2) { Sign::Plus } else { Sign::Minus }
}

fn fold_compose(
    k: &Adc,
    factors: &[Cell],
    level: usize,
) -> Result<Option<Cell>, HornError> {
    let Some(first) = factors.first() else { return Ok(None) };
    let mut acc = first.clone();
    for f in &factors[1..] {
        acc = cell_compose(k, &acc, f, level)?;
    }
    Ok(Some(acc))
}

fn unit_at(k: &Adc, of: &Cell, level: usize, sign: Sign, dim: usize) -> Cell {
    of.d(k, level, sign)
        .promote(dim)
        .expect("units are promoted upward")
}

/// Splits the outer boundary side around the `i`-th face, one level at a
/// time: whenever the current cell is composite at level `k - 1`, the
/// factor holding the face becomes `gamma_k` and the factors on both
/// sides fold into `a_k` and `b_k`; otherwise the level is padded with
/// units.
pub fn gamma_family(n: usize, i: usize) -> Result<HornFactorization, HornError> {
    if n < 2 || i > n {
        return Err(HornError::BadIndex {
            detail: format!("the factorization needs n >= 2 and 0 <= i <= n (got n={n}, i={i})"),
        });
    }
    let (k_adc, top) = oriental(n)?;
    let alpha = outer_sign(i);
    let face = k_adc
        .basis()
        .require(&outer_face_id(n, i))
        .expect("outer faces are in the basis");
    let cell_dim = n - 1;
    let mut cur = top.d(&k_adc, cell_dim, alpha);
    let mut levels = Vec::with_capacity(n - 1);
    for k in (1..=n - 1).rev() {
        let level = k - 1;
        if comp_degree(cur.chain()) == level as i64 {
            let (at, factors) = decompose_once(&k_adc, &cur)?;
            debug_assert_eq!(at, level);
            let idx = {
                let holders: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.chain().contains(face))
                    .map(|(j, _)| j)
                    .collect();
                assert_eq!(holders.len(), 1, "exactly one factor holds the face");
                holders[0]
            };
            let gamma = factors[idx].clone();
            let a = match fold_compose(&k_adc, &factors[..idx], level)? {
                Some(cell) => cell,
                None => unit_at(&k_adc, &gamma, level, Sign::Plus, cell_dim),
            };
            let b = match fold_compose(&k_adc, &factors[idx + 1..], level)? {
                Some(cell) => cell,
                None => unit_at(&k_adc, &gamma, level, Sign::Minus, cell_dim),
            };
            levels.push(HornLevel { k, a, gamma: gamma.clone(), b });
            cur = gamma;
        } else {
            let a = unit_at(&k_adc, &cur, level, Sign::Plus, cell_dim);
            let b = unit_at(&k_adc, &cur, level, Sign::Minus, cell_dim);
            levels.push(HornLevel { k, a, gamma: cur.clone(), b });
        }
    }
    levels.reverse();
    Ok(HornFactorization { n, i, alpha, levels })
}

/// The factorization presented as an equation: the nested composite
/// template, the bound side values, the recomposed left side with the
/// face substituted, and the outer boundary side it must equal.
#[derive(Clone, Debug)]
pub struct HornEquation {
    pub family: HornFactorization,
    pub template: String,
    pub lhs: Cell,
    pub rhs: Cell,
    pub holds: bool,
}

impl HornEquation {
    pub fn to_json(&self) -> Value {
        let mut bindings = serde_json::Map::new();
        for l in &self.family.levels {
            bindings.insert(format!("a{}", l.k), l.a.chain().to_json());
            bindings.insert(format!("b{}", l.k), l.b.chain().to_json());
        }
        serde_json::json!({
            "n": self.family.n,
            "i": self.family.i,
            "alpha": self.family.alpha.symbol().to_string(),
            "template": self.template,
            "bindings": Value::Object(bindings),
            "lhs": self.lhs.chain().to_json(),
            "rhs": self.rhs.chain().to_json(),
            "holds": self.holds,
        })
    }
}

/// Builds the nested template `a_{n-1} *_{n-2} ( … (a_1 *_0 x *_0 b_1) … ) *_{n-2} b_{n-1}`
/// and machine-checks that substituting the `i`-th face for `x`
/// reproduces the outer boundary side.
pub fn horn_equation(n: usize, i: usize) -> Result<HornEquation, HornError> {
    let family = gamma_family(n, i)?;
    let (k_adc, top) = oriental(n)?;
    let face = k_adc
        .basis()
        .require(&outer_face_id(n, i))
        .expect("outer faces are in the basis");

    let mut template = String::from("x");
    for k in 1..=n - 1 {
        let inner = if k == 1 { template.clone() } else { format!("({template})") };
        template = format!("a{k} *_{} {inner} *_{} b{k}", k - 1, k - 1);
    }

    let mut lhs = Cell::atom(&k_adc, face)?.promote(n - 1)?;
    for l in &family.levels {
        lhs = cell_compose(&k_adc, &l.a, &lhs, l.k - 1)?;
        lhs = cell_compose(&k_adc, &lhs, &l.b, l.k - 1)?;
    }
    let rhs = top.d(&k_adc, n - 1, family.alpha);
    let holds = lhs == rhs;
    Ok(HornEquation { family, template, lhs, rhs, holds })
}

/// True when the vertex set of the simplex id contains every vertex of
/// `{i-1, i, i+1}` that lies in `0..=n`.
pub fn admissible_support(v: &str, n: usize, i: usize) -> bool {
    let required = [i.checked_sub(1), Some(i), i.checked_add(1)];
    required
        .into_iter()
        .flatten()
        .filter(|&r| r <= n)
        .all(|r| v.contains(char::from_digit(r as u32, 10).expect("single digit")))
}

/// Support elements of `a` other than the excluded id that fail the
/// vertex-support requirement, in id order.
pub fn support_violations(a: &Chain, n: usize, i: usize, excluded: &str) -> Vec<String> {
    a.support()
        .map(|b| a.basis().id_of(b).to_string())
        .filter(|id| id != excluded && !admissible_support(id, n, i))
        .collect()
}

#[derive(Clone, Debug)]
pub struct ComplicialCheck {
    pub n: usize,
    pub i: usize,
    /// Levels `1..n-1` check `gamma_k`; level `n` checks the ambient
    /// boundary side the family factors.
    pub k: usize,
    pub violations: Vec<String>,
}

impl ComplicialCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct ComplicialReport {
    pub checks: Vec<ComplicialCheck>,
}

impl ComplicialReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(ComplicialCheck::ok)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "checks": self
                .checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "n": c.n,
                        "i": c.i,
                        "k": c.k,
                        "ok": c.ok(),
                        "violations": c.violations,
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// Checks, for every `2 <= n <= n_max` and every face index, that each
/// simplex appearing in a factor `gamma_k` (other than the face itself)
/// and in the ambient boundary side keeps the vertices `{i-1, i, i+1}`
/// clipped to the vertex range.
pub fn verify_complicial_props(n_max: usize) -> Result<ComplicialReport, HornError> {
    let mut checks = Vec::new();
    for n in 2..=n_max {
        for i in 0..=n {
            let family = gamma_family(n, i)?;
            let excluded = outer_face_id(n, i);
            for l in &family.levels {
                checks.push(ComplicialCheck {
                    n,
                    i,
                    k: l.k,
                    violations: support_violations(l.gamma.chain(), n, i, &excluded),
                });
            }
            let (k_adc, top) = oriental(n)?;
            let ambient = top.d(&k_adc, n - 1, family.alpha);
            checks.push(ComplicialCheck {
                n,
                i,
                k: n,
                violations: support_violations(ambient.chain(), n, i, &excluded),
            });
        }
    }
    Ok(ComplicialReport { checks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StratVariant {
    Plain,
    Prime,
    DoublePrime,
}

/// A simplicial set with a set of marked simplices of dimension >= 1.
#[derive(Clone, Debug)]
pub struct StratifiedComplex {
    pub base: RegularSimplicialSet,
    pub marked: BTreeSet<String>,
}

impl StratifiedComplex {
    pub fn is_marked(&self, id: &str) -> bool {
        self.marked.contains(id)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "name": self.base.name(),
            "marked": self.marked.iter().collect::<Vec<_>>(),
        })
    }
}

/// Marks the standard complex around position `k`: the plain variant
/// marks the simplices whose vertices contain `{k-1, k, k+1}` clipped to
/// range; the prime variant also marks the two neighbouring
/// codimension-1 faces; the double-prime variant marks every
/// codimension-1 face.
pub fn stratify_standard(
    n: usize,
    k: usize,
    variant: StratVariant,
) -> Result<StratifiedComplex, HornError> {
    if k > n {
        return Err(HornError::BadIndex {
            detail: format!("marking position {k} exceeds the top vertex {n}"),
        });
    }
    let base = standard(n)?;
    let mut marked: BTreeSet<String> = base
        .simplices()
        .filter(|s| s.dim >= 1 && admissible_support(&s.id, n, k))
        .map(|s| s.id.clone())
        .collect();
    let mut mark_face = |j: usize| {
        if n >= 2 {
            marked.insert(outer_face_id(n, j));
        }
    };
    match variant {
        StratVariant::Plain => {}
        StratVariant::Prime => {
            if k >= 1 {
                mark_face(k - 1);
            }
            if k < n {
                mark_face(k + 1);
            }
        }
        StratVariant::DoublePrime => {
            for j in 0..=n {
                mark_face(j);
            }
        }
    }
    Ok(StratifiedComplex { base, marked })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_of(k: &Adc, ids: &[&str]) -> Chain {
        ids.iter().fold(Chain::zero(k.basis()), |acc, id| {
            acc.add(&Chain::singleton(k.basis(), k.basis().require(id).unwrap()))
        })
    }

    #[test]
    fn family_of_four_two_matches_the_worked_table() {
        let fam = gamma_family(4, 2).unwrap();
        let (k, _) = oriental(4).unwrap();
        assert_eq!(fam.alpha, Sign::Plus);
        assert_eq!(fam.levels.len(), 3);

        let l3 = fam.level(3);
        assert_eq!(l3.a.chain(), &chain_of(&k, &["1234", "014"]));
        assert_eq!(l3.gamma.chain(), &chain_of(&k, &["0134", "123"]));
        assert_eq!(l3.b.chain(), &chain_of(&k, &["0123", "034"]));

        let l2 = fam.level(2);
        assert_eq!(l2.a.chain(), &chain_of(&k, &["123", "01", "34"]));
        assert_eq!(l2.gamma.chain(), &chain_of(&k, &["0134"]));
        assert_eq!(l2.b.chain(), &chain_of(&k, &["04"]));

        let l1 = fam.level(1);
        assert_eq!(l1.a.chain(), &chain_of(&k, &["4"]));
        assert_eq!(l1.gamma.chain(), &chain_of(&k, &["0134"]));
        assert_eq!(l1.b.chain(), &chain_of(&k, &["0"]));
    }

    #[test]
    fn gamma_one_is_always_the_distinguished_face() {
        for n in 2..=5 {
            let (k, _) = oriental(n).unwrap();
            for i in 0..=n {
                let fam = gamma_family(n, i).unwrap();
                let face = chain_of(&k, &[outer_face_id(n, i).as_str()]);
                assert_eq!(fam.level(1).gamma.chain(), &face, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn levels_recompose_upward() {
        for n in 2..=4 {
            for i in 0..=n {
                let fam = gamma_family(n, i).unwrap();
                let (k, top) = oriental(n).unwrap();
                let mut cur = fam.level(1).gamma.clone();
                for l in &fam.levels {
                    assert_eq!(&cur, &l.gamma, "n={n} i={i} k={}", l.k);
                    cur = cell_compose(&k, &l.a, &cur, l.k - 1).unwrap();
                    cur = cell_compose(&k, &cur, &l.b, l.k - 1).unwrap();
                }
                assert_eq!(cur, top.d(&k, n - 1, fam.alpha), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn side_factors_stay_inside_the_horn() {
        for n in 2..=4 {
            for i in 0..=n {
                let fam = gamma_family(n, i).unwrap();
                let top_id: String = (0..=n).map(|v| v.to_string()).collect();
                let face_id = outer_face_id(n, i);
                for l in &fam.levels {
                    for cell in [&l.a, &l.b] {
                        for b in cell.chain().support() {
                            let id = cell.chain().basis().id_of(b);
                            assert_ne!(id, top_id, "n={n} i={i} k={}", l.k);
                            assert_ne!(id, face_id, "n={n} i={i} k={}", l.k);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn equation_templates_and_substitution() {
        let eq = horn_equation(4, 2).unwrap();
        assert_eq!(
            eq.template,
            "a3 *_2 (a2 *_1 (a1 *_0 x *_0 b1) *_1 b2) *_2 b3"
        );
        assert!(eq.holds);

        let small = horn_equation(2, 0).unwrap();
        assert_eq!(small.template, "a1 *_0 x *_0 b1");
        assert!(small.holds);
        assert!(horn_equation(3, 1).unwrap().holds);
    }

    #[test]
    fn factor_chains_bound_by_side_rows() {
        for n in 2..=5 {
            let (k, top) = oriental(n).unwrap();
            for i in 0..=n {
                let fam = gamma_family(n, i).unwrap();
                let face_id = outer_face_id(n, i);
                let face = k.basis().require(&face_id).unwrap();
                let ambient = top.d(&k, n - 1, fam.alpha);
                let mut bound = Chain::singleton(k.basis(), face);
                for v in ambient.chain().support() {
                    if v == face {
                        continue;
                    }
                    let digits: Vec<usize> = k
                        .basis()
                        .id_of(v)
                        .chars()
                        .map(|c| c.to_digit(10).unwrap() as usize)
                        .collect();
                    let pos = digits.iter().position(|&d| d == i).expect("face contains i");
                    let side = if pos % 2 == 0 { Sign::Plus } else { Sign::Minus };
                    bound = bound.add(&k.atom_side(v, n - 2, side));
                }
                assert!(
                    fam.level(n - 1).gamma.chain().leq(&bound),
                    "n={n} i={i}"
                );
            }
        }
    }

    #[test]
    fn support_requirement_examples() {
        assert!(admissible_support("123", 4, 2));
        assert!(!admissible_support("034", 4, 2));
        assert!(admissible_support("01", 1, 0));
        assert!(admissible_support("012", 2, 1));
        assert!(!admissible_support("02", 2, 1));
    }

    #[test]
    fn complicial_checks_pass_and_catch_perturbations() {
        let report = verify_complicial_props(4).unwrap();
        assert!(report.ok());
        assert!(!report.checks.is_empty());

        let fam = gamma_family(4, 2).unwrap();
        let (k, _) = oriental(4).unwrap();
        let perturbed = fam.level(3).gamma.chain().add(&chain_of(&k, &["034"]));
        let violations = support_violations(&perturbed, 4, 2, &outer_face_id(4, 2));
        assert_eq!(violations, vec!["034".to_string()]);
    }

    #[test]
    fn stratification_variants_mark_expected_faces() {
        let plain = stratify_standard(4, 2, StratVariant::Plain).unwrap();
        assert!(plain.is_marked("123"));
        assert!(plain.is_marked("01234"));
        assert!(!plain.is_marked("034"));
        assert!(!plain.is_marked("0234"));

        let prime = stratify_standard(4, 2, StratVariant::Prime).unwrap();
        assert!(prime.is_marked("0234"));
        assert!(prime.is_marked("0124"));
        assert!(prime.is_marked("1234"));
        assert!(!prime.is_marked("0134"));

        let dp = stratify_standard(4, 2, StratVariant::DoublePrime).unwrap();
        for id in ["1234", "0234", "0134", "0124", "0123"] {
            assert!(dp.is_marked(id), "{id}");
        }
        assert!(dp.marked.iter().all(|id| id.len() >= 2));
    }
}

//! Finite simplicial sets presented by their nondegenerate simplices,
//! their reduced chain complexes, and signature-word face operators.
//!
//! A simplicial set is stored as a table of nondegenerate simplices with
//! explicit face maps; a face that is degenerate in the ambient set is
//! recorded as `None` and contributes nothing to boundaries. Standard
//! complexes, their boundaries, and horns are built from vertex subsets,
//! with a simplex named by its ascending vertex digits ("0124"). The
//! chain complex of a set is a directed complex whose basis is the
//! simplex table; iterated faces are organised by signature words over
//! the alphabet `{i, p}` (odd / even face indices).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::adc::{Adc, AdcError, RawAdc, validate_adc};
use crate::algebra::{Chain, Sign};
use crate::omega::Cell;

#[derive(Debug, thiserror::Error)]
pub enum SimplicialError {
    #[error("bad index: {detail}")]
    BadIndex { detail: String },
    #[error("duplicate simplex id `{id}`")]
    DuplicateSimplex { id: String },
    #[error("unknown simplex id `{id}`")]
    UnknownSimplex { id: String },
    #[error("simplex `{id}` has a malformed face list: {detail}")]
    BadFaces { id: String, detail: String },
    #[error("simplicial identity fails on `{id}`: {detail}")]
    IdentityViolation { id: String, detail: String },
    #[error("signature word `{word}` is longer than the dimension {dim} of the simplex")]
    WordTooLong { word: String, dim: usize },
    #[error(transparent)]
    Complex(#[from] AdcError),
}

/// One nondegenerate simplex: `faces[i]` is its `i`-th face, `None` when
/// that face is degenerate. A vertex has an empty face list; a simplex
/// of dimension `m >= 1` has exactly `m + 1` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Simplex {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub faces: Vec<Option<String>>,
}

#[derive(Serialize, Deserialize)]
struct RawSimplicialSet {
    #[serde(default)]
    name: String,
    simplices: Vec<Simplex>,
}

/// A finite simplicial set given by its nondegenerate simplices.
#[derive(Clone, Debug)]
pub struct RegularSimplicialSet {
    name: String,
    simplices: BTreeMap<String, Simplex>,
}

impl RegularSimplicialSet {
    /// Checks id uniqueness, face arity, face dimensions, and the
    /// simplicial identities `d_i d_j = d_{j-1} d_i` (`i < j`) along
    /// every path that stays nondegenerate.
    pub fn new(
        name: impl Into<String>,
        simplices: Vec<Simplex>,
    ) -> Result<Self, SimplicialError> {
        let mut table = BTreeMap::new();
        for s in simplices {
            if table.insert(s.id.clone(), s.clone()).is_some() {
                return Err(SimplicialError::DuplicateSimplex { id: s.id });
            }
        }
        let set = RegularSimplicialSet { name: name.into(), simplices: table };
        for s in set.simplices.values() {
            let expected = if s.dim == 0 { 0 } else { s.dim + 1 };
            if s.faces.len() != expected {
                return Err(SimplicialError::BadFaces {
                    id: s.id.clone(),
                    detail: format!(
                        "a {}-simplex needs {} faces, found {}",
                        s.dim,
                        expected,
                        s.faces.len()
                    ),
                });
            }
            for (i, f) in s.faces.iter().enumerate() {
                let Some(fid) = f else { continue };
                let Some(fs) = set.simplices.get(fid) else {
                    return Err(SimplicialError::UnknownSimplex { id: fid.clone() });
                };
                if fs.dim + 1 != s.dim {
                    return Err(SimplicialError::BadFaces {
                        id: s.id.clone(),
                        detail: format!(
                            "face {i} points at `{fid}` of dimension {}, expected {}",
                            fs.dim,
                            s.dim - 1
                        ),
                    });
                }
            }
        }
        for s in set.simplices.values() {
            if s.dim < 2 {
                continue;
            }
            for j in 1..=s.dim {
                for i in 0..j {
                    let (Some(dj), Some(di)) = (&s.faces[j], &s.faces[i]) else { continue };
                    let lhs = &set.simplices[dj].faces[i];
                    let rhs = &set.simplices[di].faces[j - 1];
                    if lhs != rhs {
                        return Err(SimplicialError::IdentityViolation {
                            id: s.id.clone(),
                            detail: format!("d_{i} d_{j} != d_{} d_{i}", j - 1),
                        });
                    }
                }
            }
        }
        Ok(set)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: &str) -> Result<&Simplex, SimplicialError> {
        self.simplices
            .get(id)
            .ok_or_else(|| SimplicialError::UnknownSimplex { id: id.to_string() })
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.values()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.values().map(|s| s.dim).max()
    }

    /// Removes the ascending positions in `removed` from `x`, highest
    /// first so lower positions keep their meaning. `None` when some
    /// intermediate face is degenerate.
    pub fn iterated_face(
        &self,
        x: &str,
        removed: &[usize],
    ) -> Result<Option<String>, SimplicialError> {
        let mut cur = self.simplex(x)?;
        debug_assert!(removed.windows(2).all(|w| w[0] < w[1]));
        for &j in removed.iter().rev() {
            match &cur.faces[j] {
                Some(next) => cur = self.simplex(next)?,
                None => return Ok(None),
            }
        }
        Ok(Some(cur.id.clone()))
    }

    /// True when, for every simplex `x` and length `k`, distinct removed
    /// position sets give distinct (nondegenerate) iterated faces.
    pub fn check_regular(&self) -> bool {
        for s in self.simplices.values() {
            if s.dim == 0 {
                continue;
            }
            let points = s.dim + 1;
            let mut seen: BTreeMap<(u32, String), Vec<usize>> = BTreeMap::new();
            for mask in 1u32..(1 << points) {
                let k = mask.count_ones();
                if k as usize > s.dim {
                    continue;
                }
                let removed: Vec<usize> =
                    (0..points).filter(|&j| mask & (1 << j) != 0).collect();
                let face = self
                    .iterated_face(&s.id, &removed)
                    .expect("faces were resolved during construction");
                let Some(face) = face else { continue };
                if let Some(other) = seen.insert((k, face.clone()), removed.clone()) {
                    debug_assert_ne!(other, removed);
                    return false;
                }
            }
        }
        true
    }

    /// The reduced chain complex: one basis element per simplex,
    /// boundary the alternating face sum with degenerate faces dropped,
    /// augmentation 1 on every vertex.
    pub fn chains_of(&self) -> Result<Adc, SimplicialError> {
        let basis = self
            .simplices
            .values()
            .map(|s| crate::algebra::BasisElement { id: s.id.clone(), dim: s.dim })
            .collect();
        let mut d = BTreeMap::new();
        let mut e = BTreeMap::new();
        for s in self.simplices.values() {
            if s.dim == 0 {
                e.insert(s.id.clone(), 1);
                continue;
            }
            let mut row: BTreeMap<String, i64> = BTreeMap::new();
            for (i, f) in s.faces.iter().enumerate() {
                let Some(fid) = f else { continue };
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let entry = row.entry(fid.clone()).or_insert(0);
                *entry += sign;
                if *entry == 0 {
                    row.remove(fid);
                }
            }
            d.insert(s.id.clone(), row);
        }
        Ok(validate_adc(&RawAdc { basis, d, e })?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut simplices: Vec<&Simplex> = self.simplices.values().collect();
        simplices.sort_by_key(|s| (s.dim, s.id.clone()));
        serde_json::json!({
            "name": self.name,
            "simplices": simplices,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, SimplicialError> {
        let raw: RawSimplicialSet = serde_json::from_value(v.clone()).map_err(|err| {
            SimplicialError::BadFaces { id: String::new(), detail: err.to_string() }
        })?;
        RegularSimplicialSet::new(raw.name, raw.simplices)
    }
}

fn vertex_digits(n: usize) -> Result<(), SimplicialError> {
    if n > 9 {
        return Err(SimplicialError::BadIndex {
            detail: format!("vertex labels are single digits, so n <= 9 (got {n})"),
        });
    }
    Ok(())
}

fn subset_simplex(vertices: &[usize]) -> Simplex {
    let id: String = vertices.iter().map(|v| v.to_string()).collect();
    let dim = vertices.len() - 1;
    let faces = if dim == 0 {
        Vec::new()
    } else {
        (0..=dim)
            .map(|i| {
                let mut rest = vertices.to_vec();
                rest.remove(i);
                Some(rest.iter().map(|v| v.to_string()).collect())
            })
            .collect()
    };
    Simplex { id, dim, faces }
}

fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << (n + 1)) {
        out.push((0..=n).filter(|&v| mask & (1 << v) != 0).collect());
    }
    out
}

/// The standard complex on vertices `0..=n`: every nonempty vertex
/// subset is a simplex, faces delete one vertex.
pub fn standard(n: usize) -> Result<RegularSimplicialSet, SimplicialError> {
    vertex_digits(n)?;
    let simplices = all_subsets(n).iter().map(|vs| subset_simplex(vs)).collect();
    RegularSimplicialSet::new(format!("standard-{n}"), simplices)
}

/// The boundary of the standard complex: everything but the top simplex.
pub fn boundary(n: usize) -> Result<RegularSimplicialSet, SimplicialError> {
    vertex_digits(n)?;
    if n == 0 {
        return Err(SimplicialError::BadIndex {
            detail: "the boundary of a point is empty".into(),
        });
    }
    let simplices = all_subsets(n)
        .iter()
        .filter(|vs| vs.len() < n + 1)
        .map(|vs| subset_simplex(vs))
        .collect();
    RegularSimplicialSet::new(format!("boundary-{n}"), simplices)
}

/// The horn obtained from the boundary by also removing the face
/// opposite vertex `i`.
pub fn horn(n: usize, i: usize) -> Result<RegularSimplicialSet, SimplicialError> {
    vertex_digits(n)?;
    if n == 0 || i > n {
        return Err(SimplicialError::BadIndex {
            detail: format!("a horn needs n >= 1 and 0 <= i <= n (got n={n}, i={i})"),
        });
    }
    let simplices = all_subsets(n)
        .iter()
        .filter(|vs| vs.len() < n + 1)
        .filter(|vs| !(vs.len() == n && !vs.contains(&i)))
        .map(|vs| subset_simplex(vs))
        .collect();
    RegularSimplicialSet::new(format!("horn-{n}-{i}"), simplices)
}

/// The chain complex of the standard complex together with its top cell.
pub fn oriental(n: usize) -> Result<(Adc, Cell), SimplicialError> {
    let s = standard(n)?;
    let k = s.chains_of()?;
    let top: String = (0..=n).map(|v| v.to_string()).collect();
    let elem = k.basis().require(&top).expect("the top simplex is in the basis");
    let cell = Cell::new(&k, Chain::singleton(k.basis(), elem), n)
        .expect("the top cell of a standard complex is coherent");
    Ok((k, cell))
}

/// Letters of a signature word: `I` stands on odd face indices, `P` on
/// even ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SigLetter {
    I,
    P,
}

impl SigLetter {
    pub fn matches(self, index: usize) -> bool {
        match self {
            SigLetter::P => index.is_multiple_of(2),
            SigLetter::I => index % 2 == 1,
        }
    }

    pub fn flip(self) -> SigLetter {
        match self {
            SigLetter::I => SigLetter::P,
            SigLetter::P => SigLetter::I,
        }
    }

    /// The signature of a face index: `P` exactly on even indices.
    pub fn of_index(index: usize) -> SigLetter {
        if index.is_multiple_of(2) { SigLetter::P } else { SigLetter::I }
    }
}

/// A word over `{i, p}` naming a family of iterated faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureWord(pub Vec<SigLetter>);

impl SignatureWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word `α, α̅, α, …` of the given length.
    pub fn alternating(first: SigLetter, len: usize) -> SignatureWord {
        let mut letters = Vec::with_capacity(len);
        let mut cur = first;
        for _ in 0..len {
            letters.push(cur);
            cur = cur.flip();
        }
        SignatureWord(letters)
    }

    pub fn parse(text: &str) -> Result<SignatureWord, SimplicialError> {
        text.chars()
            .map(|c| match c {
                'i' => Ok(SigLetter::I),
                'p' => Ok(SigLetter::P),
                other => Err(SimplicialError::BadIndex {
                    detail: format!("signature letters are `i` or `p`, found `{other}`"),
                }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SignatureWord)
    }

    /// Splits into every `(prefix, suffix)` pair, both possibly empty.
    pub fn splits(&self) -> impl Iterator<Item = (SignatureWord, SignatureWord)> + '_ {
        (0..=self.0.len()).map(|cut| {
            (SignatureWord(self.0[..cut].to_vec()), SignatureWord(self.0[cut..].to_vec()))
        })
    }

    pub fn concat(&self, mid: SigLetter, tail: &SignatureWord) -> SignatureWord {
        let mut letters = self.0.clone();
        letters.push(mid);
        letters.extend_from_slice(&tail.0);
        SignatureWord(letters)
    }
}

impl fmt::Display for SignatureWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.0 {
            match letter {
                SigLetter::I => write!(f, "i")?,
                SigLetter::P => write!(f, "p")?,
            }
        }
        Ok(())
    }
}

fn matching_sequences(points: usize, s: &SignatureWord) -> Vec<Vec<usize>> {
    fn rec(
        start: usize,
        points: usize,
        letters: &[SigLetter],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some((&first, rest)) = letters.split_first() else {
            out.push(cur.clone());
            return;
        };
        for j in start..points {
            if first.matches(j) {
                cur.push(j);
                rec(j + 1, points, rest, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, points, &s.0, &mut Vec::new(), &mut out);
    out
}

/// Sum of the iterated faces of `x` over all strictly increasing index
/// sequences whose parity pattern spells `s`; degenerate composites
/// contribute nothing. `k` must be the chain complex of `s_set`.
pub fn d_s(
    k: &Adc,
    s_set: &RegularSimplicialSet,
    x: &str,
    s: &SignatureWord,
) -> Result<Chain, SimplicialError> {
    let simplex = s_set.simplex(x)?;
    if s.len() > simplex.dim {
        return Err(SimplicialError::WordTooLong {
            word: s.to_string(),
            dim: simplex.dim,
        });
    }
    let mut acc = Chain::zero(k.basis());
    for seq in matching_sequences(simplex.dim + 1, s) {
        if let Some(face) = s_set.iterated_face(x, &seq)? {
            let elem = k
                .basis()
                .require(&face)
                .map_err(|_| SimplicialError::UnknownSimplex { id: face.clone() })?;
            acc = acc.add(&Chain::singleton(k.basis(), elem));
        }
    }
    Ok(acc)
}

/// Linear extension of [`d_s`] to nonnegative chains.
pub fn d_s_linear(
    k: &Adc,
    s_set: &RegularSimplicialSet,
    a: &Chain,
    s: &SignatureWord,
) -> Result<Chain, SimplicialError> {
    let mut acc = crate::algebra::GroupElement::zero(k.basis());
    for (elem, coeff) in a.terms() {
        let part = d_s(k, s_set, k.basis().id_of(elem), s)?;
        acc = acc.add(&part.group().scaled(coeff));
    }
    Ok(Chain::try_from_group(acc).expect("nonnegative combination of nonnegative chains"))
}

/// The closed form for the sides of an atom: level `j` of the source is
/// `d_s` with the alternating word starting at `i`, the target starts
/// at `p`; the word length is the codimension.
pub fn face_formula(
    k: &Adc,
    s_set: &RegularSimplicialSet,
    x: &str,
    j: usize,
    sign: Sign,
) -> Result<Chain, SimplicialError> {
    let simplex = s_set.simplex(x)?;
    if j > simplex.dim {
        return Err(SimplicialError::BadIndex {
            detail: format!(
                "level {j} exceeds the dimension {} of `{x}`",
                simplex.dim
            ),
        });
    }
    let first = match sign {
        Sign::Minus => SigLetter::I,
        Sign::Plus => SigLetter::P,
    };
    let word = SignatureWord::alternating(first, simplex.dim - j);
    d_s(k, s_set, x, &word)
}

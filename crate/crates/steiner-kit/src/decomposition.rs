//! Factoring cells into composites of generators.
//!
//! A cell whose chain has composition degree `c >= 0` splits as a
//! level-`c` composite with one factor per above-rest element: each
//! factor keeps its element, absorbs the boundary mismatch with its
//! neighbours, and carries the common rest. Recursing yields an
//! expression tree whose leaves are single generators; [`evaluate`] folds
//! the tree back into a cell and [`render`] prints the fully
//! parenthesized formula.

use serde_json::Value;

use crate::adc::Adc;
use crate::algebra::{Basis, BasisId, Chain, Sign};
use crate::chain_calculus::{ChainError, comp_degree, d, ordered_form};
use crate::omega::{Cell, OmegaError, cell_compose};

#[derive(Debug, thiserror::Error)]
pub enum DecompError {
    #[error("nothing to decompose: the chain has composition degree -1")]
    NothingToDecompose,
    #[error("composite node has no factors")]
    EmptyComposite,
    #[error("malformed expression tree: {detail}")]
    BadTree { detail: String },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Omega(#[from] OmegaError),
}

/// A formal composite: leaves are generators used at `dim`, inner nodes
/// compose their factors left to right at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpressionTree {
    Generator { elem: BasisId, dim: usize },
    Compose { level: usize, factors: Vec<ExpressionTree> },
}

/// One splitting step at the composition degree of the cell's chain.
/// Factors are returned left to right: the first factor contains the
/// element that comes first in the ordered form.
pub fn decompose_once(k: &Adc, c: &Cell) -> Result<(usize, Vec<Cell>), DecompError> {
    let a = c.chain();
    let cd = comp_degree(a);
    if cd < 0 {
        return Err(DecompError::NothingToDecompose);
    }
    let level = cd as usize;
    let form = ordered_form(k, a)?;
    let basis = a.basis();

    let sum = |ids: &[BasisId]| -> Chain {
        ids.iter()
            .fold(Chain::zero(basis), |acc, b| acc.add(&Chain::singleton(basis, *b)))
    };

    let mut factors = Vec::with_capacity(form.top.len());
    for (idx, &b) in form.top.iter().enumerate() {
        let elem = Chain::singleton(basis, b);
        let before = sum(&form.top[..idx]);
        let after = sum(&form.top[idx + 1..]);
        let from_before = d(k, &before, level, Sign::Minus)
            .truncated_diff(&d(k, &elem, level, Sign::Plus));
        let from_after = d(k, &after, level, Sign::Plus)
            .truncated_diff(&d(k, &elem, level, Sign::Minus));
        let beta = elem.add(&from_before.join(&from_after)).add(&form.rest);
        factors.push(Cell::new(k, beta, c.dim())?);
    }
    Ok((level, factors))
}

/// Recursively splits a cell until every factor is a single generator.
pub fn decompose_full(k: &Adc, c: &Cell) -> Result<ExpressionTree, DecompError> {
    let cd = comp_degree(c.chain());
    if cd < 0 {
        let mut support = c.chain().support();
        let Some(b) = support.next() else {
            return Err(DecompError::BadTree { detail: "the zero chain is not a cell".into() });
        };
        return Ok(ExpressionTree::Generator { elem: b, dim: c.dim() });
    }
    let (level, factors) = decompose_once(k, c)?;
    let subtrees = factors
        .iter()
        .map(|f| {
            debug_assert!(comp_degree(f.chain()) < cd, "factors must simplify");
            decompose_full(k, f)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExpressionTree::Compose { level, factors: subtrees })
}

/// Folds a tree back into a cell of the given dimension. Generators are
/// padded to the target dimension (identities when used above their own
/// dimension); composite nodes fold left to right.
pub fn evaluate(k: &Adc, t: &ExpressionTree, target_dim: usize) -> Result<Cell, DecompError> {
    match t {
        ExpressionTree::Generator { elem, .. } => {
            Ok(Cell::new(k, Chain::singleton(k.basis(), *elem), target_dim)?)
        }
        ExpressionTree::Compose { level, factors } => {
            let mut iter = factors.iter();
            let first = iter.next().ok_or(DecompError::EmptyComposite)?;
            let mut acc = evaluate(k, first, target_dim)?;
            for f in iter {
                let next = evaluate(k, f, target_dim)?;
                acc = cell_compose(k, &acc, &next, *level)?;
            }
            Ok(acc)
        }
    }
}

/// Prints the formula with every composite parenthesized, factors joined
/// by ` *_k `. A generator used at a level at or below the surrounding
/// composition level is an identity there and prints as `1_{id}`;
/// likewise a standalone generator leaf used above its own dimension.
pub fn render(basis: &Basis, t: &ExpressionTree) -> String {
    fn leaf(basis: &Basis, elem: BasisId, as_unit: bool) -> String {
        if as_unit {
            format!("1_{{{}}}", basis.id_of(elem))
        } else {
            basis.id_of(elem).to_string()
        }
    }
    match t {
        ExpressionTree::Generator { elem, dim } => {
            leaf(basis, *elem, *dim > basis.dim_of(*elem))
        }
        ExpressionTree::Compose { level, factors } => factors
            .iter()
            .map(|f| match f {
                ExpressionTree::Generator { elem, .. } => {
                    leaf(basis, *elem, basis.dim_of(*elem) <= *level)
                }
                inner => format!("({})", render(basis, inner)),
            })
            .collect::<Vec<_>>()
            .join(&format!(" *_{level} ")),
    }
}

/// Serializes as `{"gen": id}` leaves and `{"k": level, "factors": []}`
/// nodes.
pub fn tree_to_json(basis: &Basis, t: &ExpressionTree) -> Value {
    match t {
        ExpressionTree::Generator { elem, .. } => {
            serde_json::json!({ "gen": basis.id_of(*elem) })
        }
        ExpressionTree::Compose { level, factors } => serde_json::json!({
            "k": level,
            "factors": factors.iter().map(|f| tree_to_json(basis, f)).collect::<Vec<_>>(),
        }),
    }
}

/// Parses the [`tree_to_json`] format. Leaves come back at their own
/// dimension; [`evaluate`] pads them to the target dimension.
pub fn tree_from_json(basis: &Basis, v: &Value) -> Result<ExpressionTree, DecompError> {
    let bad = |detail: String| DecompError::BadTree { detail };
    let obj = v
        .as_object()
        .ok_or_else(|| bad("expected an object".into()))?;
    if let Some(genv) = obj.get("gen") {
        let id = genv
            .as_str()
            .ok_or_else(|| bad("`gen` must be a basis id string".into()))?;
        let elem = basis
            .require(id)
            .map_err(|e| bad(e.to_string()))?;
        return Ok(ExpressionTree::Generator { elem, dim: basis.dim_of(elem) });
    }
    let level = obj
        .get("k")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing integer field `k`".into()))? as usize;
    let factors = obj
        .get("factors")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array field `factors`".into()))?
        .iter()
        .map(|f| tree_from_json(basis, f))
        .collect::<Result<Vec<_>, _>>()?;
    if factors.is_empty() {
        return Err(DecompError::EmptyComposite);
    }
    Ok(ExpressionTree::Compose { level, factors })
}

//! Cells and their two equivalent presentations: two-column tables of
//! iterated sources and targets, and single coherent chains.
//!
//! [`SteinerTable`] stores, for each level `k` up to the cell dimension,
//! the `k`-dimensional source and target rows. [`Cell`] stores a coherent
//! chain together with the dimension at which it is being used (a chain
//! of lower degree acts as a higher identity). [`chain_of_table`] and
//! [`table_of_chain`] convert between the two; both presentations compose
//! levelwise and the conversions preserve composition.

use num_traits::One;
use serde_json::Value;

use crate::adc::Adc;
use crate::algebra::{AlgebraError, BasisId, Chain, Sign, split_parts};
use crate::chain_calculus::{self, d, homogeneous_part};

#[derive(Debug, thiserror::Error)]
pub enum OmegaError {
    #[error("table is not coherent: augmentations ({minus_aug}, {plus_aug}), expected (1, 1)")]
    NotCoherentTable { minus_aug: String, plus_aug: String },
    #[error("not composable at level {level}: {detail}")]
    NotComposable { level: usize, detail: String },
    #[error("chain is not coherent: augmentation is {aug}, expected 1")]
    NotCoherent { aug: String },
    #[error("cell dimension {dim} is below the chain degree {degree}")]
    DimensionBelowDegree { dim: usize, degree: i64 },
    #[error("invalid table: {detail}")]
    BadTable { detail: String },
    #[error(transparent)]
    Wire(#[from] AlgebraError),
}

/// Two-column presentation of a cell: row `k` holds the `k`-dimensional
/// source (`minus`) and target (`plus`), and the two top rows agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerTable {
    minus: Vec<Chain>,
    plus: Vec<Chain>,
}

impl SteinerTable {
    /// Validates the defining conditions: equal row counts, homogeneous
    /// rows of the right dimension, equal top rows, and the boundary of
    /// every row equal to target minus source one level down.
    pub fn new(k: &Adc, minus: Vec<Chain>, plus: Vec<Chain>) -> Result<SteinerTable, OmegaError> {
        if minus.is_empty() || minus.len() != plus.len() {
            return Err(OmegaError::BadTable {
                detail: format!(
                    "expected equally many nonempty rows on both sides, got {} and {}",
                    minus.len(),
                    plus.len()
                ),
            });
        }
        let n = minus.len() - 1;
        for (j, row) in minus.iter().chain(plus.iter()).enumerate() {
            let dim = (j % (n + 1)) as i64;
            if !row.basis().same(k.basis()) {
                return Err(OmegaError::BadTable {
                    detail: "rows belong to a different complex".into(),
                });
            }
            if !row.is_homogeneous() || (!row.is_zero() && row.degree() != dim) {
                return Err(OmegaError::BadTable {
                    detail: format!("row {dim} is not homogeneous of dimension {dim}: {row}"),
                });
            }
        }
        if minus[n] != plus[n] {
            return Err(OmegaError::BadTable {
                detail: format!("top rows differ: {} vs {}", minus[n], plus[n]),
            });
        }
        for j in 1..=n {
            for row in [&minus[j], &plus[j]] {
                let expect = plus[j - 1].group().sub(minus[j - 1].group());
                if k.boundary_of(row.group()) != expect {
                    return Err(OmegaError::BadTable {
                        detail: format!(
                            "boundary of row {j} ({row}) does not match the rows below"
                        ),
                    });
                }
            }
        }
        Ok(SteinerTable { minus, plus })
    }

    pub fn dim(&self) -> usize {
        self.minus.len() - 1
    }

    pub fn row(&self, k: usize, sign: Sign) -> &Chain {
        match sign {
            Sign::Minus => &self.minus[k],
            Sign::Plus => &self.plus[k],
        }
    }

    pub fn top(&self) -> &Chain {
        &self.minus[self.dim()]
    }

    /// Coherent tables are the cells: both dimension-0 rows augment to 1.
    pub fn is_coherent(&self, k: &Adc) -> bool {
        k.aug_of(self.minus[0].group()).is_one() && k.aug_of(self.plus[0].group()).is_one()
    }

    /// Level-`j` source or target: rows below `j` unchanged, row `j` of
    /// the chosen side duplicated on top.
    pub fn d(&self, j: usize, sign: Sign) -> SteinerTable {
        assert!(j <= self.dim(), "table source/target level out of range");
        let mut minus: Vec<Chain> = self.minus[..j].to_vec();
        let mut plus: Vec<Chain> = self.plus[..j].to_vec();
        let top = self.row(j, sign).clone();
        minus.push(top.clone());
        plus.push(top);
        SteinerTable { minus, plus }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "dim": self.dim(),
            "minus": self.minus.iter().map(Chain::to_json).collect::<Vec<_>>(),
            "plus": self.plus.iter().map(Chain::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(k: &Adc, v: &Value) -> Result<SteinerTable, OmegaError> {
        let bad = |detail: &str| OmegaError::BadTable { detail: detail.into() };
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer field `dim`"))? as usize;
        let parse_rows = |key: &str| -> Result<Vec<Chain>, OmegaError> {
            let rows = obj
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing row array"))?;
            rows.iter().map(|r| Ok(Chain::from_json(k.basis(), r)?)).collect()
        };
        let minus = parse_rows("minus")?;
        let plus = parse_rows("plus")?;
        if minus.len() != dim + 1 {
            return Err(bad("row count does not match `dim`"));
        }
        SteinerTable::new(k, minus, plus)
    }
}

/// Pads `x` with zero rows up to dimension `m`: the identity of `x` at
/// the higher dimension.
pub fn table_unit(x: &SteinerTable, m: usize) -> Result<SteinerTable, OmegaError> {
    if m < x.dim() {
        return Err(OmegaError::BadTable {
            detail: format!("unit dimension {m} is below the table dimension {}", x.dim()),
        });
    }
    let basis = x.top().basis().clone();
    let mut minus = x.minus.clone();
    let mut plus = x.plus.clone();
    while minus.len() <= m {
        minus.push(Chain::zero(&basis));
        plus.push(Chain::zero(&basis));
    }
    Ok(SteinerTable { minus, plus })
}

/// Level-`level` composite of two tables of equal dimension. Defined when
/// the level-`level` target of `y` equals the source of `x`; the shared
/// part appears once, rows of `y` fill the source column below the level,
/// rows of `x` fill the target column, and higher rows add.
pub fn table_compose(
    k: &Adc,
    x: &SteinerTable,
    y: &SteinerTable,
    level: usize,
) -> Result<SteinerTable, OmegaError> {
    let n = x.dim();
    if y.dim() != n {
        return Err(OmegaError::NotComposable {
            level,
            detail: format!("table dimensions differ: {} vs {}", n, y.dim()),
        });
    }
    if level >= n {
        return Err(OmegaError::NotComposable {
            level,
            detail: format!("level must be below the dimension {n}"),
        });
    }
    if x.d(level, Sign::Minus) != y.d(level, Sign::Plus) {
        return Err(OmegaError::NotComposable {
            level,
            detail: "level source of the left factor differs from the level target of the right"
                .into(),
        });
    }
    let mut minus = Vec::with_capacity(n + 1);
    let mut plus = Vec::with_capacity(n + 1);
    for j in 0..=n {
        if j <= level {
            minus.push(y.minus[j].clone());
            plus.push(x.plus[j].clone());
        } else {
            minus.push(x.minus[j].add(&y.minus[j]));
            plus.push(x.plus[j].add(&y.plus[j]));
        }
    }
    SteinerTable::new(k, minus, plus)
}

/// A coherent chain used at a dimension at least its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    chain: Chain,
    dim: usize,
}

impl Cell {
    pub fn new(k: &Adc, chain: Chain, dim: usize) -> Result<Cell, OmegaError> {
        let aug = chain_calculus::augmentation(k, &chain);
        if !aug.is_one() {
            return Err(OmegaError::NotCoherent { aug: aug.to_string() });
        }
        if chain.degree() > dim as i64 {
            return Err(OmegaError::DimensionBelowDegree { dim, degree: chain.degree() });
        }
        Ok(Cell { chain, dim })
    }

    /// The singleton cell of a generator at its own dimension.
    pub fn atom(k: &Adc, b: BasisId) -> Result<Cell, OmegaError> {
        Cell::new(k, Chain::singleton(k.basis(), b), k.basis().dim_of(b))
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The same chain as an identity at a higher dimension.
    pub fn promote(&self, m: usize) -> Result<Cell, OmegaError> {
        if m < self.dim {
            return Err(OmegaError::DimensionBelowDegree { dim: m, degree: self.dim as i64 });
        }
        Ok(Cell { chain: self.chain.clone(), dim: m })
    }

    /// Level-`j` source or target cell (the cell itself when `j` is at or
    /// above its dimension).
    pub fn d(&self, k: &Adc, j: usize, sign: Sign) -> Cell {
        if j >= self.dim {
            return self.clone();
        }
        Cell { chain: d(k, &self.chain, j, sign), dim: j }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "dim": self.dim, "chain": self.chain.to_json() })
    }

    pub fn from_json(k: &Adc, v: &Value) -> Result<Cell, OmegaError> {
        let bad = |detail: &str| OmegaError::BadTable { detail: detail.into() };
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer field `dim`"))? as usize;
        let chain = Chain::from_json(
            k.basis(),
            obj.get("chain").ok_or_else(|| bad("missing field `chain`"))?,
        )?;
        Cell::new(k, chain, dim)
    }
}

/// Collapses a coherent table to a single chain: the top target row plus,
/// at every lower level, the part of the target row not produced as a
/// boundary from above.
pub fn chain_of_table(k: &Adc, x: &SteinerTable) -> Result<Cell, OmegaError> {
    if !x.is_coherent(k) {
        return Err(OmegaError::NotCoherentTable {
            minus_aug: k.aug_of(x.row(0, Sign::Minus).group()).to_string(),
            plus_aug: k.aug_of(x.row(0, Sign::Plus).group()).to_string(),
        });
    }
    let n = x.dim();
    let mut acc = x.top().group().clone();
    for j in 0..n {
        let (from_above, _) = split_parts(&k.boundary_of(x.row(j + 1, Sign::Plus).group()));
        acc = acc.add(&x.row(j, Sign::Plus).group().sub(from_above.group()));
    }
    let chain =
        Chain::try_from_group(acc).expect("boundary targets never exceed the rows below them");
    Cell::new(k, chain, n)
}

/// Expands a cell into its table of iterated sources and targets.
pub fn table_of_chain(k: &Adc, c: &Cell) -> SteinerTable {
    let n = c.dim();
    let mut minus = Vec::with_capacity(n + 1);
    let mut plus = Vec::with_capacity(n + 1);
    for j in 0..n {
        minus.push(homogeneous_part(&d(k, c.chain(), j, Sign::Minus), j as i64));
        plus.push(homogeneous_part(&d(k, c.chain(), j, Sign::Plus), j as i64));
    }
    let top = homogeneous_part(c.chain(), n as i64);
    minus.push(top.clone());
    plus.push(top);
    SteinerTable::new(k, minus, plus).expect("rows of a coherent chain form a table")
}

/// Level-`level` composite of two cells of equal dimension. Defined when
/// the level source of `x` equals the level target of `y`; the composite
/// is `x + y` minus one copy of the shared boundary, truncated at zero.
pub fn cell_compose(k: &Adc, x: &Cell, y: &Cell, level: usize) -> Result<Cell, OmegaError> {
    if x.dim() != y.dim() {
        return Err(OmegaError::NotComposable {
            level,
            detail: format!("cell dimensions differ: {} vs {}", x.dim(), y.dim()),
        });
    }
    if level >= x.dim() {
        return Err(OmegaError::NotComposable {
            level,
            detail: format!("level must be below the dimension {}", x.dim()),
        });
    }
    let z = d(k, x.chain(), level, Sign::Minus);
    if z != d(k, y.chain(), level, Sign::Plus) {
        return Err(OmegaError::NotComposable {
            level,
            detail: format!(
                "level-{level} source of the left factor ({z}) differs from the level target \
                 of the right ({})",
                d(k, y.chain(), level, Sign::Plus)
            ),
        });
    }
    let combined = x.chain().group().sub(z.group()).add(y.chain().group());
    let (chain, _) = split_parts(&combined);
    Cell::new(k, chain, x.dim())
}

/// True when `x` and `y` compose at `level`, i.e. the level source of `x`
/// matches the level target of `y` and the dimensions agree.
pub fn composable(k: &Adc, x: &Cell, y: &Cell, level: usize) -> bool {
    x.dim() == y.dim()
        && level < x.dim()
        && d(k, x.chain(), level, Sign::Minus) == d(k, y.chain(), level, Sign::Plus)
}

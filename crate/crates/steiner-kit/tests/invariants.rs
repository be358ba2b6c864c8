//! Randomized laws: lattice identities on free group elements, side
//! operators on sampled cells, composition bookkeeping, and the
//! signature calculus on the standard complexes.

use std::sync::LazyLock;

use proptest::prelude::*;

use steiner_kit::adc::Adc;
use steiner_kit::algebra::{Chain, Coeff, GroupElement, Sign, combine, split_parts};
use steiner_kit::chain_calculus::{
    d, degree, homogeneous_part, is_coherent, parallel, rest,
};
use steiner_kit::omega::{Cell, cell_compose, chain_of_table, composable, table_of_chain};
use steiner_kit::simplicial::{
    RegularSimplicialSet, SigLetter, SignatureWord, d_s, d_s_linear, oriental, standard,
};
use steiner_kit::verify::sample_cells;

static DELTA3: LazyLock<Adc> = LazyLock::new(|| standard(3).unwrap().chains_of().unwrap());

static ORIENTALS: LazyLock<Vec<(Adc, Cell)>> =
    LazyLock::new(|| (0..=5).map(|n| oriental(n).unwrap()).collect());

static SETS: LazyLock<Vec<(RegularSimplicialSet, Adc)>> = LazyLock::new(|| {
    (0..=5)
        .map(|n| {
            let s = standard(n).unwrap();
            let k = s.chains_of().unwrap();
            (s, k)
        })
        .collect()
});

fn group_of(k: &Adc, vals: &[i64]) -> GroupElement {
    GroupElement::from_terms(
        k.basis(),
        k.basis().ids().zip(vals).map(|(b, &v)| (b, Coeff::from(v))),
    )
}

fn chain_of(k: &Adc, vals: &[i64]) -> Chain {
    Chain::try_from_group(group_of(k, vals)).expect("generated values are nonnegative")
}

fn group_vals() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4..=4i64, DELTA3.basis().len())
}

fn chain_vals() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..=4i64, DELTA3.basis().len())
}

/// Deterministic composable pair among sampled cells, if any.
fn composable_pair(k: &Adc, dim: usize, seed: u64) -> Option<(Cell, Cell, usize)> {
    if dim == 0 {
        return None;
    }
    let cells = sample_cells(k, dim, 20, seed);
    for x in &cells {
        for y in &cells {
            for level in 0..dim {
                if composable(k, x, y, level) {
                    return Some((x.clone(), y.clone(), level));
                }
            }
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn split_parts_recovers_the_element(vals in group_vals()) {
        let x = group_of(&DELTA3, &vals);
        let (pos, neg) = split_parts(&x);
        let back = combine(pos.group(), neg.group(), &Coeff::from(1), &Coeff::from(-1));
        prop_assert_eq!(back, x);
        prop_assert!(pos.meet(&neg).is_zero());
    }

    #[test]
    fn combine_is_the_scaled_sum(a in group_vals(), b in group_vals(), s in -3..=3i64, t in -3..=3i64) {
        let x = group_of(&DELTA3, &a);
        let y = group_of(&DELTA3, &b);
        let lhs = combine(&x, &y, &Coeff::from(s), &Coeff::from(t));
        let rhs = x.scaled(&Coeff::from(s)).add(&y.scaled(&Coeff::from(t)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lattice_laws(a in chain_vals(), b in chain_vals(), c in chain_vals()) {
        let x = chain_of(&DELTA3, &a);
        let y = chain_of(&DELTA3, &b);
        let z = chain_of(&DELTA3, &c);
        prop_assert_eq!(x.join(&y), y.join(&x));
        prop_assert_eq!(x.meet(&y), y.meet(&x));
        prop_assert_eq!(x.join(&y).join(&z), x.join(&y.join(&z)));
        prop_assert_eq!(x.meet(&y).meet(&z), x.meet(&y.meet(&z)));
        prop_assert_eq!(x.join(&x), x.clone());
        prop_assert_eq!(x.meet(&x.join(&y)), x.clone());
        prop_assert_eq!(x.meet(&y.join(&z)), x.meet(&y).join(&x.meet(&z)));
    }

    #[test]
    fn truncated_diff_laws(a in chain_vals(), b in chain_vals()) {
        let x = chain_of(&DELTA3, &a);
        let y = chain_of(&DELTA3, &b);
        let diff = x.truncated_diff(&y);
        prop_assert!(diff.leq(&x));
        prop_assert_eq!(diff.add(&x.meet(&y)), x.clone());
        prop_assert_eq!(diff.is_zero(), x.leq(&y));
        prop_assert_eq!(x.join(&y), y.add(&diff));
    }

    #[test]
    fn grading_partitions_the_chain(a in chain_vals()) {
        let x = chain_of(&DELTA3, &a);
        let mut total = Chain::zero(DELTA3.basis());
        for k in 0..=DELTA3.max_dim().max(0) {
            total = total.add(&homogeneous_part(&x, k));
        }
        prop_assert_eq!(total, x.clone());
        let g = degree(&x);
        prop_assert!(g <= DELTA3.max_dim());
        if g >= 0 {
            prop_assert!(!homogeneous_part(&x, g).is_zero());
            prop_assert_eq!(rest(&x, g - 1).add(&homogeneous_part(&x, g)), x);
        } else {
            prop_assert!(x.is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn sampled_cells_are_coherent_and_globular(n in 1..=4usize, seed in any::<u64>()) {
        let (k, _) = &ORIENTALS[n];
        for cell in sample_cells(k, n, 6, seed) {
            let a = cell.chain();
            prop_assert!(a.leq_one());
            prop_assert!(is_coherent(k, a));
            prop_assert!(degree(a) <= cell.dim() as i64);
            let g = degree(a).max(0) as usize;
            for m in 1..=g {
                for j in 0..m {
                    for alpha in [Sign::Minus, Sign::Plus] {
                        let inner = d(k, a, m, alpha);
                        for beta in [Sign::Minus, Sign::Plus] {
                            prop_assert_eq!(d(k, &inner, j, beta), d(k, a, j, beta));
                        }
                    }
                }
            }
            for j in 0..g {
                let meet = d(k, a, j, Sign::Minus).meet(&d(k, a, j, Sign::Plus));
                prop_assert_eq!(meet, rest(a, j as i64));
                if j >= 1 {
                    prop_assert!(parallel(k, &d(k, a, j, Sign::Minus), &d(k, a, j, Sign::Plus), j - 1));
                }
            }
        }
    }

    #[test]
    fn tables_round_trip_sampled_cells(n in 1..=4usize, seed in any::<u64>()) {
        let (k, _) = &ORIENTALS[n];
        for cell in sample_cells(k, n, 4, seed) {
            let table = table_of_chain(k, &cell);
            for j in 0..n {
                let low_m = table.row(j, Sign::Minus);
                let low_p = table.row(j, Sign::Plus);
                let diff = combine(low_p.group(), low_m.group(), &Coeff::from(1), &Coeff::from(-1));
                for sign in [Sign::Minus, Sign::Plus] {
                    let upper = table.row(j + 1, sign);
                    prop_assert_eq!(&diff, &k.boundary_of(upper.group()));
                }
            }
            let back = chain_of_table(k, &table).unwrap();
            prop_assert_eq!(back, cell);
        }
    }

    #[test]
    fn atom_tables_are_tables(n in 1..=5usize, sel in any::<prop::sample::Index>()) {
        let (k, _) = &ORIENTALS[n];
        let ids: Vec<_> = k.basis().ids().collect();
        let b = ids[sel.index(ids.len())];
        let dim = k.basis().dim_of(b);
        for j in 0..dim {
            let minus = k.atom_side(b, j, Sign::Minus);
            let plus = k.atom_side(b, j, Sign::Plus);
            prop_assert!(minus.meet(&plus).is_zero());
            let above = k.atom_side(b, j + 1, Sign::Plus);
            let diff = combine(plus.group(), minus.group(), &Coeff::from(1), &Coeff::from(-1));
            prop_assert_eq!(diff, k.boundary_of(above.group()));
        }
    }

    #[test]
    fn composition_bookkeeping(n in 1..=4usize, seed in any::<u64>()) {
        let (k, _) = &ORIENTALS[n];
        let Some((x, y, level)) = composable_pair(k, n, seed) else {
            return Ok(());
        };
        let comp = cell_compose(k, &x, &y, level).unwrap();
        for m in level as i64 + 1..=n as i64 {
            let parts = homogeneous_part(x.chain(), m).add(&homogeneous_part(y.chain(), m));
            prop_assert_eq!(homogeneous_part(comp.chain(), m), parts);
        }
        prop_assert_eq!(comp.d(k, level, Sign::Minus), y.d(k, level, Sign::Minus));
        prop_assert_eq!(comp.d(k, level, Sign::Plus), x.d(k, level, Sign::Plus));
        if level >= 1 {
            prop_assert_eq!(rest(comp.chain(), level as i64 - 1), rest(x.chain(), level as i64 - 1));
        }
        let sum = x.chain().add(y.chain());
        prop_assert!(comp.chain().leq(&sum));
    }

    #[test]
    fn units_are_neutral(n in 1..=4usize, seed in any::<u64>()) {
        let (k, _) = &ORIENTALS[n];
        for cell in sample_cells(k, n, 3, seed) {
            for level in 0..n {
                let src = cell.d(k, level, Sign::Minus).promote(n).unwrap();
                let tgt = cell.d(k, level, Sign::Plus).promote(n).unwrap();
                prop_assert_eq!(cell_compose(k, &cell, &src, level).unwrap(), cell.clone());
                prop_assert_eq!(cell_compose(k, &tgt, &cell, level).unwrap(), cell.clone());
            }
        }
    }

    #[test]
    fn leibniz_rules(n in 2..=5usize, sel in any::<prop::sample::Index>(), bits in prop::collection::vec(any::<bool>(), 0..=2)) {
        let (s_set, k) = &SETS[n];
        let ids: Vec<String> = s_set
            .simplices()
            .filter(|x| x.dim >= 1)
            .map(|x| x.id.clone())
            .collect();
        let x = &ids[sel.index(ids.len())];
        let dim = s_set.simplex(x).unwrap().dim;
        let word = SignatureWord(
            bits.iter().map(|&b| if b { SigLetter::P } else { SigLetter::I }).collect(),
        );
        prop_assume!(word.len() < dim);
        for head in [SigLetter::P, SigLetter::I] {
            let once = d_s(k, s_set, x, &word).unwrap();
            let lhs = d_s_linear(k, s_set, &once, &SignatureWord(vec![head])).unwrap();
            let mut rhs = Chain::zero(k.basis());
            for (prefix, suffix) in word.splits() {
                let inserted = match head {
                    SigLetter::P => SigLetter::of_index(prefix.len()),
                    SigLetter::I => SigLetter::of_index(prefix.len()).flip(),
                };
                let joined = prefix.concat(inserted, &suffix);
                rhs = rhs.add(&d_s(k, s_set, x, &joined).unwrap());
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn distinct_words_have_disjoint_faces(
        n in 2..=5usize,
        sel in any::<prop::sample::Index>(),
        a in prop::collection::vec(any::<bool>(), 1..=2),
        b in prop::collection::vec(any::<bool>(), 1..=2),
    ) {
        prop_assume!(a.len() == b.len() && a != b);
        let (s_set, k) = &SETS[n];
        let ids: Vec<String> = s_set
            .simplices()
            .filter(|x| x.dim >= a.len())
            .map(|x| x.id.clone())
            .collect();
        prop_assume!(!ids.is_empty());
        let x = &ids[sel.index(ids.len())];
        let to_word = |bits: &[bool]| {
            SignatureWord(bits.iter().map(|&v| if v { SigLetter::P } else { SigLetter::I }).collect())
        };
        let left = d_s(k, s_set, x, &to_word(&a)).unwrap();
        let right = d_s(k, s_set, x, &to_word(&b)).unwrap();
        prop_assert!(left.meet(&right).is_zero());
    }
}

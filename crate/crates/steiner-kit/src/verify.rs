//! Named check suites over the built-in complexes: closed-form face
//! identities, coherence properties of randomly composed cells, horn
//! recomposition, and vertex-support checks. The command-line `verify`
//! subcommand and the acceptance tests both drive these runners.

use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::adc::Adc;
use crate::algebra::{Chain, Sign};
use crate::chain_calculus::{d, degree, ordered_form, rest};
use crate::decomposition::{decompose_full, evaluate};
use crate::horns::{gamma_family, horn_equation, outer_face_id, verify_complicial_props};
use crate::omega::{Cell, cell_compose, chain_of_table, composable, table_of_chain};
use crate::simplicial::{face_formula, oriental, standard};

/// Seed used by the command line when none is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "suite": self.suite,
            "ok": self.ok(),
            "checks": self
                .checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "name": c.name,
                        "ok": c.ok,
                        "detail": c.detail,
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

fn check(checks: &mut Vec<Check>, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
    checks.push(Check { name: name.into(), ok, detail: detail.into() });
}

/// Reproducible cells of the full dimension of `k`: atoms seeded into a
/// pool that grows by composing random composable pairs at random
/// levels, occasionally replaced by boundary sides to vary the shapes.
pub fn sample_cells(k: &Adc, dim: usize, count: usize, seed: u64) -> Vec<Cell> {
    let atoms: Vec<Cell> = k
        .basis()
        .ids()
        .map(|b| {
            Cell::atom(k, b)
                .expect("atoms of the built-in complexes are coherent")
                .promote(dim)
                .expect("basis dimensions stay at or below the ambient dimension")
        })
        .collect();
    if dim == 0 {
        return (0..count).map(|j| atoms[j % atoms.len()].clone()).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = atoms;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut made = None;
        for _ in 0..200 {
            let x = &pool[rng.random_range(0..pool.len())];
            let y = &pool[rng.random_range(0..pool.len())];
            let level = rng.random_range(0..dim);
            if composable(k, x, y, level) {
                made = Some(
                    cell_compose(k, x, y, level).expect("composable pair composes"),
                );
                break;
            }
        }
        let mut cell = match made {
            Some(cell) => cell,
            None => pool[rng.random_range(0..pool.len())].clone(),
        };
        if rng.random_bool(0.25) {
            let level = rng.random_range(0..dim);
            let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
            cell = cell
                .d(k, level, sign)
                .promote(dim)
                .expect("sides live at lower dimensions");
        }
        if pool.len() < 512 {
            pool.push(cell.clone());
        }
        out.push(cell);
    }
    out
}

/// Closed-form iterated faces against the recursive side operators, for
/// every simplex of every standard complex up to `max_n`.
pub fn suite_faces(max_n: usize) -> SuiteReport {
    let mut checks = Vec::new();
    for n in 0..=max_n {
        let s = standard(n).expect("max_n stays in the digit range");
        let k = s.chains_of().expect("standard complexes validate");
        let mut tested = 0usize;
        let mut ok = true;
        for x in s.simplices() {
            let elem = k.basis().require(&x.id).expect("basis matches the set");
            let atom = Chain::singleton(k.basis(), elem);
            for j in 0..=x.dim {
                for sign in [Sign::Minus, Sign::Plus] {
                    let closed = face_formula(&k, &s, &x.id, j, sign)
                        .expect("level stays within the dimension");
                    ok &= closed == d(&k, &atom, j, sign);
                    tested += 1;
                }
            }
        }
        check(
            &mut checks,
            format!("faces-standard-{n}"),
            ok,
            format!("{tested} side computations"),
        );
    }
    SuiteReport { suite: "faces".into(), checks }
}

/// Properties of sampled cells: chains stay multiplicity-free, sides are
/// globular, the rest below the top level is the meet of the two sides,
/// ordered tops are totally ordered, and the three round-trips
/// (table, decomposition) are identities.
pub fn suite_coherence(max_n: usize, seed: u64, per_dim: usize) -> SuiteReport {
    let mut checks = Vec::new();
    for n in 0..=max_n {
        let (k, _) = oriental(n).expect("max_n stays in the digit range");
        let cells = sample_cells(&k, n, per_dim, seed ^ n as u64);
        let mut ok_leq = true;
        let mut ok_glob = true;
        let mut ok_rest = true;
        let mut ok_fork = true;
        let mut ok_round = true;
        for cell in &cells {
            ok_leq &= cell.chain().leq_one();
            let g = degree(cell.chain());
            for m in 1..=g.max(0) as usize {
                for j in 0..m {
                    for alpha in [Sign::Minus, Sign::Plus] {
                        for beta in [Sign::Minus, Sign::Plus] {
                            let through = d(&k, &d(&k, cell.chain(), m, alpha), j, beta);
                            ok_glob &= through == d(&k, cell.chain(), j, beta);
                        }
                    }
                }
            }
            for j in 0..g.max(0) as usize {
                let meet = d(&k, cell.chain(), j, Sign::Minus)
                    .meet(&d(&k, cell.chain(), j, Sign::Plus));
                ok_rest &= meet == rest(cell.chain(), j as i64);
            }
            match ordered_form(&k, cell.chain()) {
                Ok(form) if form.comp_degree >= 0 => {
                    let c = form.comp_degree as usize;
                    for (i, &u) in form.top.iter().enumerate() {
                        for alpha in [Sign::Minus, Sign::Plus] {
                            let side = k.atom_side(u, c, alpha);
                            for &v in form.top.iter().skip(i + 1) {
                                ok_fork &= side.meet(&k.atom_side(v, c, alpha)).is_zero();
                            }
                            ok_fork &= side.meet(&form.rest).is_zero();
                        }
                    }
                }
                Ok(_) => {}
                Err(_) => ok_fork = false,
            }
            let table = table_of_chain(&k, cell);
            ok_round &= chain_of_table(&k, &table).is_ok_and(|c| &c == cell);
            ok_round &= match decompose_full(&k, cell) {
                Ok(tree) => evaluate(&k, &tree, cell.dim()).is_ok_and(|c| &c == cell),
                Err(_) => false,
            };
        }
        let detail = format!("{} sampled cells", cells.len());
        check(&mut checks, format!("multiplicity-free-{n}"), ok_leq, detail.clone());
        check(&mut checks, format!("globular-sides-{n}"), ok_glob, detail.clone());
        check(&mut checks, format!("rest-is-side-meet-{n}"), ok_rest, detail.clone());
        check(&mut checks, format!("fork-free-{n}"), ok_fork, detail.clone());
        check(&mut checks, format!("round-trips-{n}"), ok_round, detail);
    }
    SuiteReport { suite: "coherence".into(), checks }
}

/// Horn factorizations recompose the outer boundary side exactly, the
/// lowest factor is the distinguished face, and side factors avoid the
/// two missing simplices.
pub fn suite_horns(max_n: usize) -> SuiteReport {
    let mut checks = Vec::new();
    for n in 2..=max_n {
        let (k, _) = oriental(n).expect("max_n stays in the digit range");
        let mut ok_recompose = true;
        let mut ok_face = true;
        let mut ok_inside = true;
        for i in 0..=n {
            let eq = horn_equation(n, i).expect("indices are in range");
            ok_recompose &= eq.holds;
            let face_id = outer_face_id(n, i);
            let face = k.basis().require(&face_id).expect("face exists");
            let fam = gamma_family(n, i).expect("indices are in range");
            ok_face &= fam.level(1).gamma.chain() == &Chain::singleton(k.basis(), face);
            let top_id: String = (0..=n).map(|v| v.to_string()).collect();
            for l in &fam.levels {
                for side in [&l.a, &l.b] {
                    for b in side.chain().support() {
                        let id = k.basis().id_of(b);
                        ok_inside &= id != top_id && id != face_id;
                    }
                }
            }
        }
        check(&mut checks, format!("recompose-{n}"), ok_recompose, format!("{} face indices", n + 1));
        check(&mut checks, format!("lowest-factor-is-face-{n}"), ok_face, String::new());
        check(&mut checks, format!("sides-inside-horn-{n}"), ok_inside, String::new());
    }
    SuiteReport { suite: "horns".into(), checks }
}

/// Vertex-support requirement on every factor of every factorization.
pub fn suite_complicial(max_n: usize) -> SuiteReport {
    let mut checks = Vec::new();
    let report = verify_complicial_props(max_n).expect("indices are in range");
    let rows = report.checks.len();
    let violations: usize = report.checks.iter().map(|c| c.violations.len()).sum();
    check(
        &mut checks,
        format!("support-up-to-{max_n}"),
        report.ok(),
        format!("{rows} rows, {violations} violations"),
    );
    SuiteReport { suite: "complicial".into(), checks }
}

/// Runs every suite with bounds that keep the command line responsive.
pub fn run_all(max_n: usize, seed: u64) -> Vec<SuiteReport> {
    vec![
        suite_faces(max_n),
        suite_coherence(max_n, seed, 60),
        suite_horns(max_n),
        suite_complicial(max_n),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_and_sized() {
        let (k, _) = oriental(3).unwrap();
        let a = sample_cells(&k, 3, 25, 7);
        let b = sample_cells(&k, 3, 25, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 25);
        let c = sample_cells(&k, 3, 25, 8);
        assert_ne!(a, c, "different seeds vary the stream");
    }

    #[test]
    fn sampling_handles_the_point() {
        let (k, top) = oriental(0).unwrap();
        let cells = sample_cells(&k, 0, 5, 1);
        assert_eq!(cells.len(), 5);
        assert!(cells.iter().all(|c| c == &top));
    }

    #[test]
    fn small_suites_pass() {
        assert!(suite_faces(3).ok());
        assert!(suite_coherence(3, DEFAULT_SEED, 20).ok());
        assert!(suite_horns(3).ok());
        assert!(suite_complicial(3).ok());
    }

    #[test]
    fn reports_serialize_with_stable_fields() {
        let report = suite_complicial(2);
        let v = report.to_json();
        assert_eq!(v["suite"], "complicial");
        assert_eq!(v["ok"], true);
        assert!(v["checks"].as_array().is_some());
    }
}

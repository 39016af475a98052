//! Oracle-equivalence suites behind `gstate verify`. Instances are drawn
//! sequentially from one seeded generator so a run is reproducible.

use anyhow::Result;
use clap::ValueEnum;
use gstate::lattice::Rect;
use gstate::stabilizer::hadamards_on;
use gstate::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

const TOL: f64 = oracle::TOLERANCE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Entropy,
    Ghz,
    Weighted,
    Graph,
    Bell,
    Tangle,
    Arealaw,
    Physical,
    Negative,
}

pub struct Config {
    pub seed: u64,
    pub n: usize,
    pub count: usize,
    pub inject_sign_flip: bool,
    pub guard: usize,
}

#[derive(Serialize)]
struct SuiteReport {
    suite: &'static str,
    passed: bool,
    checks: usize,
    failed: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Default)]
struct Checker {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
    note: Option<String>,
}

impl Checker {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(what());
            }
        }
    }

    /// Errors count as failed checks rather than aborting the suite.
    fn ok<T>(&mut self, r: gstate::Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                let msg = what();
                self.check(false, || format!("{msg}: {e}"));
                None
            }
        }
    }

    fn report(self, suite: &'static str) -> SuiteReport {
        SuiteReport {
            suite,
            passed: self.failed == 0,
            checks: self.checks,
            failed: self.failed,
            failures: self.failures,
            note: self.note,
        }
    }
}

struct Ctx<'a> {
    cfg: &'a Config,
    oracle: Oracle,
}

impl Ctx<'_> {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    /// The fixture as handed to the eigencheck; the negative control negates
    /// its first generator.
    fn fixture(&self, s: StabilizerGroup) -> StabilizerGroup {
        if !self.cfg.inject_sign_flip || s.is_empty() {
            return s;
        }
        let mut gens = s.generators().to_vec();
        gens[0] = gens[0].negated();
        StabilizerGroup::new(s.n(), gens).expect("negating a generator keeps the group valid")
    }
}

fn random_row(rng: &mut impl Rng, n: usize) -> BitRow {
    BitRow::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)))
}

fn random_group(rng: &mut impl Rng, n: usize, k: usize) -> SpinFlipGroup {
    let mut m = BitMatrix::new(n);
    while m.rank() < k {
        m.push_bit_row(random_row(rng, n)).expect("row length matches");
        if m.nrows() > m.rank() {
            m = m.rref().matrix;
        }
    }
    SpinFlipGroup::from_generators(&m).expect("binary rows")
}

fn random_partition(rng: &mut impl Rng, n: usize) -> Partition {
    Partition::new(n, (0..n).filter(|_| rng.random_bool(0.5))).expect("sites in range")
}

fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_connected_bipartite(rng: &mut impl Rng, n: usize) -> Graph {
    loop {
        let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let density = rng.random_range(0.3..0.9);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if side[u] != side[v] && rng.random_bool(density) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges).expect("valid edges");
        if g.is_connected() {
            return g;
        }
    }
}

/// Nontrivial bipartitions with site 1 on side A.
fn bipartitions(n: usize) -> impl Iterator<Item = Partition> {
    (0..1u64 << n.saturating_sub(1))
        .map(|m| (m << 1) | 1)
        .filter(move |&m| m != (1u64 << n) - 1)
        .map(move |m| Partition::from_mask(n, m).expect("mask in range"))
}

fn entropy(ctx: &Ctx) -> Checker {
    let mut rng = ctx.rng(1);
    let mut c = Checker::default();
    let o = &ctx.oracle;
    for _ in 0..ctx.cfg.count {
        let n = rng.random_range(1..=ctx.cfg.n.max(1));
        let k = rng.random_range(0..=n);
        let g = random_group(&mut rng, n, k);
        let parts: Vec<Partition> = (0..5).map(|_| random_partition(&mut rng, n)).collect();
        let Some(s) = c.ok(o.build_homogeneous(&g), || format!("n={n}")) else {
            continue;
        };
        if let Some(ok) = c.ok(
            o.stabilizer_eigencheck(&s, &ctx.fixture(g.stabilizer_completion())),
            || "eigencheck".into(),
        ) {
            c.check(ok, || {
                format!("completion of {:?} does not fix |G>", g.basis().row_vectors())
            });
        }
        for p in parts {
            let f = homogeneous_entropy(&g, &p).map(|r| r.entropy_bits);
            let e = o.entropy(&s, &p);
            if let (Some(f), Some(e)) = (c.ok(f, || "formula".into()), c.ok(e, || "oracle".into())) {
                c.check((f - e).abs() < TOL, || format!("n={n} k={k} A={{{p}}}: {f} vs {e}"));
            }
        }
    }
    c
}

fn ghz(ctx: &Ctx) -> Checker {
    let mut c = Checker::default();
    let o = &ctx.oracle;
    for n in 2..=ctx.cfg.n.max(2) {
        let g = SpinFlipGroup::ghz(n);
        let Some(s) = c.ok(o.build_homogeneous(&g), || format!("GHZ{n}")) else {
            continue;
        };
        for p in bipartitions(n) {
            let f = homogeneous_entropy(&g, &p).map(|r| r.entropy_bits).unwrap_or(f64::NAN);
            let e = o.entropy(&s, &p).unwrap_or(f64::NAN);
            c.check(f == 1.0 && (e - 1.0).abs() < TOL, || {
                format!("GHZ{n} A={{{p}}}: {f} / {e}")
            });
        }
    }
    for d in [2u32, 3, 5] {
        for n in 2..=ctx.cfg.n.clamp(2, 6) {
            let Some(g) = c.ok(cyclic_group(n, d), || format!("cyclic d={d}")) else {
                continue;
            };
            let Some(s) = c.ok(o.build_qudit(&g), || format!("cyclic n={n} d={d}")) else {
                continue;
            };
            let want = (d as f64).log2();
            for p in bipartitions(n) {
                let f = qudit_entropy(&g, &p).map(|r| r.entropy_bits).unwrap_or(f64::NAN);
                let e = o.entropy(&s, &p).unwrap_or(f64::NAN);
                c.check((f - want).abs() < TOL && (e - want).abs() < TOL, || {
                    format!("cyclic n={n} d={d} A={{{p}}}: {f} / {e}")
                });
            }
        }
    }
    c
}

fn weighted(ctx: &Ctx) -> Checker {
    let mut rng = ctx.rng(3);
    let mut c = Checker::default();
    let o = &ctx.oracle;
    for i in 0..ctx.cfg.count {
        let n = rng.random_range(1..=ctx.cfg.n.clamp(1, 8));
        let k = rng.random_range(0..=n);
        let g = random_group(&mut rng, n, k);
        let p = random_partition(&mut rng, n);
        let sparse = i % 4 == 0;
        let mut tables: [ChaCha8Rng; 3] = [0; 3].map(|_| ChaCha8Rng::seed_from_u64(rng.random()));
        let [ra, rb, rc] = &mut tables;
        // in sparse instances every second β entry vanishes; the first never does
        let mut j = 0;
        let w = WeightedGState::from_fn(
            g,
            p,
            |_| random_complex(ra),
            |_| random_complex(rb),
            |_| {
                j += 1;
                let z = random_complex(rc);
                if sparse && j % 2 == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z
                }
            },
        );
        let Some(w) = c.ok(w, || format!("n={n} k={k}")) else {
            continue;
        };
        let bound = c.ok(weighted_bound(&w), || "bound".into());
        let e = c.ok(o.build_weighted(&w).and_then(|s| o.entropy(&s, w.partition())), || {
            "oracle".into()
        });
        if let (Some(b), Some(e)) = (bound, e) {
            c.check(e <= b + TOL && (b - e).abs() < TOL, || {
                format!("n={n} k={k}: bound {b} oracle {e}")
            });
        }
    }
    c
}

fn graph(ctx: &Ctx) -> Checker {
    let mut rng = ctx.rng(4);
    let mut c = Checker::default();
    let o = &ctx.oracle;
    for _ in 0..ctx.cfg.count {
        let n = rng.random_range(2..=ctx.cfg.n.max(2));
        let g = random_connected_bipartite(&mut rng, n);
        let parts: Vec<Partition> = (0..3).map(|_| random_partition(&mut rng, n)).collect();
        let edges = || format!("{:?}", g.edges().collect::<Vec<_>>());
        let Some(coloring) = two_coloring(&g)
            .ok_or_else(|| c.check(false, || format!("{} not bipartite", edges())))
            .ok()
        else {
            continue;
        };
        let Some((group, had)) = c.ok(to_ghomogeneous(&g, &coloring), edges) else {
            continue;
        };
        let stab = graph_state_stabilizer(&g);
        if let Some(conj) = c.ok(stab.conjugate_local(&hadamards_on(n, &had)), edges) {
            c.check(
                groups_equal(&group.stabilizer_completion(), &conj).unwrap_or(false),
                || format!("{}: completion differs from the conjugated graph stabilizer", edges()),
            );
        }
        let Some(state) = c.ok(o.build_graph_state(&g), edges) else {
            continue;
        };
        if let Some(ok) = c.ok(o.stabilizer_eigencheck(&state, &ctx.fixture(stab)), edges) {
            c.check(ok, || {
                format!("{}: graph stabilizer does not fix the CZ state", edges())
            });
        }
        for p in parts {
            let Some(r) = c.ok(graph_entropy(&g, &p), edges) else {
                continue;
            };
            let s = r.entropy.entropy_bits;
            if let Some(e) = c.ok(o.entropy(&state, &p), edges) {
                c.check((s - e).abs() < TOL, || format!("{} A={{{p}}}: {s} vs {e}", edges()));
            }
            c.check(s <= r.v1_size as f64 && r.v1_size <= r.half_n, || {
                format!("{}: S={s} |V1|={} n/2={}", edges(), r.v1_size, r.half_n)
            });
        }
    }
    c
}

fn bell(ctx: &Ctx) -> Checker {
    let mut c = Checker::default();
    let o = &ctx.oracle;
    let phi_plus = StabilizerGroup::parse("XX\nZZ").expect("fixture parses");
    let expect = BitMatrix::parse_rows(&["1100", "0011"], 2).expect("fixture parses");
    c.check(phi_plus.generator_matrix() == expect, || {
        "generator matrix differs from (11|00; 00|11)".into()
    });
    let z1 = [LocalClifford::z(), LocalClifford::identity()];
    if let Some(phi_minus) = c.ok(phi_plus.conjugate_local(&z1), || "Z1 conjugation".into()) {
        let gens: Vec<String> = phi_minus.generators().iter().map(|g| g.to_string()).collect();
        c.check(gens == ["-XX", "+ZZ"], || format!("conjugated generators {gens:?}"));
        let gens_for_check = ctx.fixture(phi_minus);
        let mut minus = o.build_homogeneous(&SpinFlipGroup::ghz(2)).expect("two qubits fit");
        minus.apply_single_qubit(0, oracle::gates::Z).expect("qubit state");
        c.check(
            o.stabilizer_eigencheck(&minus, &gens_for_check).unwrap_or(false),
            || format!("Phi- not fixed by {gens_for_check}"),
        );
    }
    let bell = o.build_homogeneous(&SpinFlipGroup::ghz(2)).expect("two qubits fit");
    let plus = ctx.fixture(phi_plus);
    c.check(o.stabilizer_eigencheck(&bell, &plus).unwrap_or(false), || {
        format!("Phi+ not fixed by {plus}")
    });
    c
}

fn tangle(ctx: &Ctx) -> Checker {
    let mut rng = ctx.rng(6);
    let mut c = Checker::default();
    let o = &ctx.oracle;
    let half = (ctx.cfg.n / 2).max(1);
    for i in 0..ctx.cfg.count {
        let n = 2 * rng.random_range(1..=half);
        let k = rng.random_range(0..=n);
        let mut g = random_group(&mut rng, n, k);
        if i % 2 == 0 {
            // push half the sample towards τ = 1
            let rows = g
                .basis_rows()
                .iter()
                .map(|r| {
                    if r.weight() % 2 == 1 {
                        r.xor(&BitRow::ones(n))
                    } else {
                        r.clone()
                    }
                })
                .chain([BitRow::ones(n)]);
            g = SpinFlipGroup::from_bit_rows(n, rows).expect("row lengths match");
        }
        let Some(r) = c.ok(ntangle_closed_form(&g), || format!("n={n}")) else {
            continue;
        };
        if let Some(t) = c.ok(o.build_homogeneous(&g).and_then(|s| o.ntangle(&s)), || format!("n={n}")) {
            c.check((r.tau_n as f64 - t).abs() < TOL, || {
                format!("n={n} k={}: {} vs {t}", g.k(), r.tau_n)
            });
        }
        if r.parity.generator_parities.contains(&1) || r.chi == 0 {
            c.check(r.tau_n == 0, || format!("n={n}: tau must vanish"));
        }
    }
    for n in (2..=2 * half).step_by(2) {
        let r = ntangle_closed_form(&SpinFlipGroup::ghz(n)).map(|r| r.tau_n);
        c.check(r == Ok(1), || format!("GHZ{n}: {r:?}"));
    }
    c
}

fn arealaw(ctx: &Ctx) -> Checker {
    use std::collections::{BTreeMap, BTreeSet};
    let mut c = Checker::default();
    let top = ctx.cfg.n.clamp(4, 32);
    let tori: Vec<(usize, usize)> = [(4, 4), (top, top), (top, top.div_ceil(2) + 1)].into_iter().collect();
    let results: Vec<Checker> = tori
        .par_iter()
        .map(|&(w, h)| {
            let mut c = Checker::default();
            let Some((l, g)) = c.ok(build_torus(w, h), || format!("{w}x{h}")) else {
                return c;
            };
            let mut law: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for rw in 1..w {
                for rh in 1..h {
                    let Some(base) = c.ok(arealaw_check(&l, &g, Rect::new(0, 0, rw, rh)), || "cut".into()) else {
                        continue;
                    };
                    c.check(base.bound_holds, || {
                        format!("{w}x{h} {rw}x{rh}: S={} > sigma={}", base.s, base.sigma)
                    });
                    law.entry(base.n_ab).or_default().insert(base.s);
                    let (x, y) = (w / 2, h - 1);
                    if let Some(r) = c.ok(arealaw_check(&l, &g, Rect::new(x, y, rw, rh)), || "cut".into()) {
                        c.check(r.s == base.s, || {
                            format!("{w}x{h} {rw}x{rh} moved to ({x},{y}): {} vs {}", r.s, base.s)
                        });
                    }
                }
            }
            c.check(law.values().all(|s| s.len() == 1), || {
                format!("{w}x{h}: S not a function of n_AB")
            });
            c
        })
        .collect();
    for r in results {
        c.checks += r.checks;
        c.failed += r.failed;
        c.failures
            .extend(r.failures.into_iter().take(5 - c.failures.len().min(5)));
    }
    let o = &ctx.oracle;
    let (l, g) = build_torus(3, 3).expect("3x3 torus");
    if let Some(state) = c.ok(o.build_homogeneous(&g), || "3x3 oracle".into()) {
        for (rw, rh) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let rect = Rect::new(1, 0, rw, rh);
            let f = arealaw_check(&l, &g, rect).map(|r| r.s as f64);
            let e = region_cut(&l, rect).and_then(|(_, p)| o.entropy(&state, &p));
            if let (Some(f), Some(e)) = (c.ok(f, || "formula".into()), c.ok(e, || "oracle".into())) {
                c.check((f - e).abs() < TOL, || format!("3x3 {rect}: formula {f} oracle {e}"));
            }
        }
    }
    c
}

/// Only instances whose loops leave side A are covered by the equality
/// result; the others are counted in the note.
fn physical(ctx: &Ctx) -> Checker {
    let mut rng = ctx.rng(8);
    let mut c = Checker::default();
    let o = &ctx.oracle;
    let (mut covered, mut outside, mut outside_equal) = (0, 0, 0);
    let cases = ctx.cfg.count.min(48);
    for (w, h) in [(2, 3), (3, 3)] {
        let (l, g) = build_torus(w, h).expect("small torus");
        for i in 0..cases {
            let rect = [Rect::new(0, 0, 1, 1), Rect::new(1, 1, 1, 1), Rect::new(0, 1, 1, 2)][i % 3];
            let coeffs = [0; 4].map(|_| random_complex(&mut rng));
            let Some(r) = c.ok(physical_state_entropy_check(&l, &g, rect, coeffs, o), || {
                format!("{w}x{h} {rect}")
            }) else {
                continue;
            };
            if r.loops_avoid_region {
                covered += 1;
                c.check(r.equal, || {
                    format!("{w}x{h} {rect}: S_phys {} vs S_G {}", r.s_phys, r.s_g)
                });
            } else {
                outside += 1;
                outside_equal += r.equal as usize;
            }
        }
    }
    c.note = Some(format!(
        "{covered} instances with both loops movable off side A; {outside_equal}/{outside} others happen to be equal"
    ));
    c
}

fn negative(_ctx: &Ctx) -> Checker {
    let mut c = Checker::default();
    for n in [3, 5, 7] {
        let rejected = Graph::ring(n).and_then(|g| graph_entropy(&g, &Partition::parse("1", n)?));
        c.check(matches!(rejected, Err(Error::NotBipartite(_))), || {
            format!("odd ring {n} accepted")
        });
    }
    for n in [1, 3, 5, 9] {
        c.check(
            matches!(
                ntangle_closed_form(&SpinFlipGroup::ghz(n)),
                Err(Error::OddQubitCount(_))
            ),
            || format!("odd n={n} accepted"),
        );
    }
    for d in [4u32, 6, 8, 9, 15] {
        c.check(matches!(cyclic_group(3, d), Err(Error::NotPrime(_))), || {
            format!("d={d} accepted")
        });
    }
    let fixtures = [
        StabilizerGroup::parse("XX\nZZ").expect("fixture parses"),
        SpinFlipGroup::ghz(3).stabilizer_completion(),
        graph_state_stabilizer(&Graph::line(4)),
        graph_state_stabilizer(&Graph::star(4)),
    ];
    for s in &fixtures {
        let n = s.n();
        for (i, gen) in s.generators().iter().enumerate() {
            for bit in 0..2 * n {
                let (mut x, mut z) = (gen.x().clone(), gen.z().clone());
                if bit < n {
                    x.flip(bit)
                } else {
                    z.flip(bit - n)
                }
                let mut gens = s.generators().to_vec();
                gens[i] = PauliString::new(x, z, gen.phase()).expect("lengths match");
                c.check(StabilizerGroup::new(n, gens).is_err(), || {
                    format!("flip {bit} of {gen} in {s} accepted")
                });
            }
        }
    }
    c
}

type SuiteEntry = (Suite, &'static str, fn(&Ctx) -> Checker);

pub fn run(suite: Suite, cfg: &Config) -> Result<(Value, bool)> {
    let ctx = Ctx {
        cfg,
        oracle: Oracle::with_guard(cfg.guard),
    };
    let all: [SuiteEntry; 9] = [
        (Suite::Entropy, "entropy", entropy),
        (Suite::Ghz, "ghz", ghz),
        (Suite::Weighted, "weighted", weighted),
        (Suite::Graph, "graph", graph),
        (Suite::Bell, "bell", bell),
        (Suite::Tangle, "tangle", tangle),
        (Suite::Arealaw, "arealaw", arealaw),
        (Suite::Physical, "physical", physical),
        (Suite::Negative, "negative", negative),
    ];
    let reports: Vec<SuiteReport> = all
        .iter()
        .filter(|(s, _, _)| suite == Suite::All || suite == *s)
        .map(|(_, name, f)| f(&ctx).report(name))
        .collect();
    let passed = reports.iter().all(|r| r.passed);
    let summary = json!({
        "seed": cfg.seed,
        "n": cfg.n,
        "count": cfg.count,
        "inject_sign_flip": cfg.inject_sign_flip,
        "suites": reports,
        "passed": passed,
    });
    Ok((summary, passed))
}

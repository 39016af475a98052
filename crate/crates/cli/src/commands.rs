use anyhow::{bail, Context, Result};
use gstate::lattice::{Rect, StarLattice};
use gstate::oracle::TOLERANCE;
use gstate::{
    arealaw_check, build_torus, ntangle_closed_form, physical_state_entropy_check, region_cut, Oracle, Partition,
    SpinFlipGroup,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::output::{object, print_csv, print_json};
use crate::source::{parse_torus, Source};
use crate::{verify, Cli, Command};

/// Ok(true) iff every check the command performed passed.
pub fn run(cli: &Cli) -> Result<bool> {
    let oracle = Oracle::with_guard(cli.guard);
    match &cli.command {
        Command::Entropy {
            source,
            partition,
            oracle: use_oracle,
        } => {
            let (label, src) = Source::resolve(source)?;
            entropy(&label, &src, partition.as_deref(), use_oracle.then_some(&oracle))
        }
        Command::Sweep {
            source,
            max_size,
            rects,
            oracle: use_oracle,
            csv,
        } => {
            if *rects {
                let torus = source.torus.as_deref().context("--rects needs --torus WxH")?;
                return rect_table(torus, use_oracle.then_some(&oracle), *csv);
            }
            if source.torus.is_some() {
                bail!("--torus is used with --rects");
            }
            let (label, src) = Source::resolve(&source.state)?;
            sweep(&label, &src, *max_size, use_oracle.then_some(&oracle), *csv)
        }
        Command::Ntangle {
            source,
            oracle: use_oracle,
        } => {
            let (label, src) = Source::resolve(source)?;
            ntangle(&label, &src, use_oracle.then_some(&oracle))
        }
        Command::Arealaw {
            torus,
            rect,
            sweep,
            oracle: use_oracle,
            csv,
        } => match (rect, sweep) {
            (Some(rect), false) => arealaw_one(torus, rect, use_oracle.then_some(&oracle)),
            (None, true) => rect_table(torus, use_oracle.then_some(&oracle), *csv),
            _ => bail!("arealaw needs exactly one of --rect x,y,w,h or --sweep"),
        },
        Command::Physcheck {
            torus,
            rect,
            coeffs,
            random,
            seed,
        } => physcheck(torus, rect, coeffs.as_deref(), *random, *seed, &oracle),
        Command::Verify {
            suite,
            seed,
            n,
            count,
            inject_sign_flip,
        } => {
            let cfg = verify::Config {
                seed: *seed,
                n: *n,
                count: *count,
                inject_sign_flip: *inject_sign_flip,
                guard: cli.guard,
            };
            let (summary, passed) = verify::run(*suite, &cfg)?;
            print_json(summary);
            Ok(passed)
        }
    }
}

/// One output row: the closed form (if any) and the oracle comparison.
fn entropy_row(
    src: &Source,
    p: &Partition,
    state: Option<&(Oracle, gstate::DenseState)>,
) -> Result<(Map<String, Value>, bool)> {
    let mut row = Map::new();
    row.insert("partition".into(), json!(p.to_string()));
    let formula = src.formula(p)?;
    let bits = formula
        .as_ref()
        .and_then(|f| f.get("entropy_bits"))
        .and_then(Value::as_f64);
    if let Some(f) = formula {
        row.extend(f);
    }
    let mut ok = true;
    if let Some((o, s)) = state {
        let e = o.entropy(s, p)?;
        row.insert("oracle_bits".into(), json!(e));
        if let Some(b) = bits {
            let diff = (b - e).abs();
            row.insert("abs_diff".into(), json!(diff));
            ok = diff < TOLERANCE;
        }
    }
    Ok((row, ok))
}

fn with_oracle(src: &Source, oracle: Option<&Oracle>) -> Result<Option<(Oracle, gstate::DenseState)>> {
    match oracle {
        Some(o) => Ok(Some((*o, src.dense(o)?))),
        None => Ok(None),
    }
}

fn entropy(label: &str, src: &Source, partition: Option<&str>, oracle: Option<&Oracle>) -> Result<bool> {
    let p = src.partition(partition)?;
    if oracle.is_none() && matches!(src, Source::CompositeCyclic { .. }) {
        bail!(
            "local dimension {} is not prime: no rank formula, rerun with --oracle",
            src.d()
        );
    }
    let state = with_oracle(src, oracle)?;
    let (row, ok) = entropy_row(src, &p, state.as_ref())?;
    let mut out = Map::new();
    out.insert("source".into(), json!(label));
    out.insert("n".into(), json!(src.n()));
    out.insert("d".into(), json!(src.d()));
    out.extend(row);
    print_json(Value::Object(out));
    Ok(ok)
}

/// Upper limit on sweep sizes: one row per unordered bipartition.
const MAX_SWEEP_SITES: usize = 24;

fn sweep(label: &str, src: &Source, max_size: Option<usize>, oracle: Option<&Oracle>, csv: bool) -> Result<bool> {
    let n = src.n();
    if matches!(src, Source::Weighted(_)) {
        bail!("a weighted state is defined for a single partition; use `entropy`");
    }
    if oracle.is_none() && matches!(src, Source::CompositeCyclic { .. }) {
        bail!(
            "local dimension {} is not prime: no rank formula, rerun with --oracle",
            src.d()
        );
    }
    if n < 2 {
        bail!("a sweep needs at least two sites");
    }
    if n > MAX_SWEEP_SITES {
        bail!(
            "{n} sites give 2^{} bipartitions; the sweep limit is {MAX_SWEEP_SITES} sites",
            n - 1
        );
    }
    let max = max_size.unwrap_or(n - 1);
    let mut parts: Vec<Partition> = (0..1u64 << (n - 1))
        .map(|m| (m << 1) | 1)
        .filter(|&m| m != (1u64 << n) - 1 && (m.count_ones() as usize) <= max)
        .map(|m| Partition::from_mask(n, m))
        .collect::<gstate::Result<_>>()?;
    parts.sort_by(|a, b| a.side_a().cmp(b.side_a()));
    let state = with_oracle(src, oracle)?;
    let rows: Vec<(Map<String, Value>, bool)> = parts
        .par_iter()
        .map(|p| {
            entropy_row(src, p, state.as_ref()).map(|(mut row, ok)| {
                // constant across rows and not a table cell
                row.remove("coloring");
                (row, ok)
            })
        })
        .collect::<Result<_>>()?;
    let ok = rows.iter().all(|(_, ok)| *ok);
    let rows: Vec<Value> = rows.into_iter().map(|(r, _)| Value::Object(r)).collect();
    if csv {
        print_csv(&rows);
    } else {
        print_json(json!({ "source": label, "n": n, "d": src.d(), "rows": rows }));
    }
    Ok(ok)
}

fn ntangle(label: &str, src: &Source, oracle: Option<&Oracle>) -> Result<bool> {
    let (group, _) = src.spin_flip()?;
    let closed = match ntangle_closed_form(&group) {
        Ok(r) => r,
        Err(e) => {
            if let Some(o) = oracle {
                let t = o.ntangle(&src.dense(o)?)?;
                bail!("{e}; |<psi|Y^n|psi*>|^2 evaluates to {}", crate::output::round12(t));
            }
            return Err(e.into());
        }
    };
    let mut out = Map::new();
    out.insert("source".into(), json!(label));
    out.insert("n".into(), json!(group.n()));
    out.extend(object(serde_json::to_value(&closed)?));
    let mut ok = true;
    if let Some(o) = oracle {
        // the oracle sees the source state itself, so a graph source also
        // checks that the Hadamards leave the tangle unchanged
        let t = o.ntangle(&src.dense(o)?)?;
        let diff = (closed.tau_n as f64 - t).abs();
        out.insert("oracle_tau".into(), json!(t));
        out.insert("abs_diff".into(), json!(diff));
        ok = diff < TOLERANCE;
    }
    print_json(Value::Object(out));
    Ok(ok)
}

fn torus(spec: &str) -> Result<(StarLattice, SpinFlipGroup)> {
    let (w, h) = parse_torus(spec)?;
    Ok(build_torus(w, h)?)
}

fn rect(spec: &str) -> Result<Rect> {
    spec.parse::<Rect>().context("parsing --rect")
}

/// Report for one rectangle, with the oracle entropy of the homogeneous
/// state when a dense state is supplied.
fn arealaw_row(
    l: &StarLattice,
    g: &SpinFlipGroup,
    r: Rect,
    state: Option<&(Oracle, gstate::DenseState)>,
) -> Result<(Map<String, Value>, bool)> {
    let report = arealaw_check(l, g, r)?;
    let mut row = object(serde_json::to_value(&report)?);
    row.insert("rect".into(), json!(r.to_string()));
    row.insert("perimeter".into(), json!(r.perimeter()));
    let mut ok = report.bound_holds;
    if let Some((o, s)) = state {
        let (_, p) = region_cut(l, r)?;
        let e = o.entropy(s, &p)?;
        let diff = (e - report.s as f64).abs();
        row.insert("oracle_bits".into(), json!(e));
        row.insert("abs_diff".into(), json!(diff));
        ok &= diff < TOLERANCE;
    }
    Ok((row, ok))
}

fn torus_state(g: &SpinFlipGroup, oracle: Option<&Oracle>) -> Result<Option<(Oracle, gstate::DenseState)>> {
    oracle.map(|o| Ok((*o, o.build_homogeneous(g)?))).transpose()
}

fn arealaw_one(torus_spec: &str, rect_spec: &str, oracle: Option<&Oracle>) -> Result<bool> {
    let (l, g) = torus(torus_spec)?;
    let state = torus_state(&g, oracle)?;
    let (row, ok) = arealaw_row(&l, &g, rect(rect_spec)?, state.as_ref())?;
    print_json(Value::Object(row));
    Ok(ok)
}

/// Every rectangle size up to half the torus in each direction, anchored at
/// the origin, with a translation check over all anchor points.
fn rect_table(torus_spec: &str, oracle: Option<&Oracle>, csv: bool) -> Result<bool> {
    let (l, g) = torus(torus_spec)?;
    let state = torus_state(&g, oracle)?;
    let sizes: Vec<(usize, usize)> = (1..=l.width() / 2)
        .flat_map(|w| (1..=l.height() / 2).map(move |h| (w, h)))
        .collect();
    let rows: Vec<(Map<String, Value>, bool)> = sizes
        .par_iter()
        .map(|&(w, h)| {
            let (mut row, ok) = arealaw_row(&l, &g, Rect::new(0, 0, w, h), state.as_ref())?;
            let s = row["S"].as_u64();
            let mut invariant = true;
            for y in 0..l.height() {
                for x in 0..l.width() {
                    invariant &= arealaw_check(&l, &g, Rect::new(x, y, w, h))?.s as u64 == s.unwrap_or(u64::MAX);
                }
            }
            row.insert("translation_invariant".into(), json!(invariant));
            Ok((row, ok && invariant))
        })
        .collect::<Result<_>>()?;
    let ok = rows.iter().all(|(_, ok)| *ok);
    let rows: Vec<Value> = rows.into_iter().map(|(r, _)| Value::Object(r)).collect();
    if csv {
        print_csv(&rows);
    } else {
        print_json(json!({ "torus": format!("{}x{}", l.width(), l.height()), "rows": rows }));
    }
    Ok(ok)
}

/// `re,im;re,im;re,im;re,im`.
fn parse_coeffs(spec: &str) -> Result<[Complex64; 4]> {
    let parsed: Vec<Complex64> = spec
        .split(';')
        .map(|pair| {
            let (re, im) = pair.split_once(',').unwrap_or((pair, "0"));
            Ok(Complex64::new(re.trim().parse()?, im.trim().parse()?))
        })
        .collect::<Result<_>>()
        .with_context(|| format!("parsing --coeffs {spec:?}"))?;
    parsed
        .try_into()
        .map_err(|v: Vec<Complex64>| anyhow::anyhow!("--coeffs needs 4 entries, got {}", v.len()))
}

fn physcheck(
    torus_spec: &str,
    rect_spec: &str,
    coeffs: Option<&str>,
    random: Option<usize>,
    seed: u64,
    oracle: &Oracle,
) -> Result<bool> {
    let (l, g) = torus(torus_spec)?;
    let r = rect(rect_spec)?;
    let vectors: Vec<[Complex64; 4]> = match (coeffs, random) {
        (Some(spec), _) => vec![parse_coeffs(spec)?],
        (None, Some(count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| [0; 4].map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
                .collect()
        }
        (None, None) => vec![[Complex64::new(1.0, 0.0); 4]],
    };
    let reports = vectors
        .iter()
        .map(|c| physical_state_entropy_check(&l, &g, r, *c, oracle))
        .collect::<gstate::Result<Vec<_>>>()?;
    let ok = reports.iter().all(|r| r.equal);
    let mut rows = Vec::new();
    for (rep, c) in reports.iter().zip(&vectors) {
        let mut row = object(serde_json::to_value(rep)?);
        row.insert("rect".into(), json!(rep.rect.to_string()));
        row.insert(
            "coefficients".into(),
            json!(c.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()),
        );
        rows.push(Value::Object(row));
    }
    if rows.len() == 1 {
        print_json(rows.pop().expect("one row"));
    } else {
        let equal = reports.iter().filter(|r| r.equal).count();
        print_json(json!({
            "torus": format!("{}x{}", l.width(), l.height()),
            "rect": r.to_string(),
            "seed": seed,
            "equal": equal,
            "total": reports.len(),
            "loops_avoid_region": reports.first().map(|r| r.loops_avoid_region),
            "reports": rows,
        }));
    }
    Ok(ok)
}

//! Browser front end: three operations over the closed forms, each taking
//! plain strings or numbers and returning a JSON document. The functions
//! are ordinary Rust so they can be tested natively; `wasm` wraps them for
//! JavaScript.

use gstate::lattice::Rect;
use gstate::spin_flip::parse_group_file;
use gstate::{
    arealaw_check, build_torus, graph_entropy, homogeneous_entropy, ntangle_closed_form, qudit_entropy, region_cut,
    BitMatrix, Graph, Partition, QuditShiftGroup, SpinFlipGroup,
};
use serde_json::{json, Value};

/// Entropy profiles cover every bipartition, so sizes stay small.
pub const MAX_PROFILE_SITES: usize = 16;
pub const MAX_TORUS_SIDE: usize = 64;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Area-law report for one rectangle plus the drawing data: every edge with
/// its endpoints and whether it lies on side A or crosses the cut.
pub fn torus_region(width: usize, height: usize, x: usize, y: usize, w: usize, h: usize) -> Result<String, String> {
    if width > MAX_TORUS_SIDE || height > MAX_TORUS_SIDE {
        return Err(format!("torus sides are limited to {MAX_TORUS_SIDE}"));
    }
    let (l, g) = build_torus(width, height).map_err(err)?;
    let rect = Rect::new(x % width, y % height, w, h);
    let report = arealaw_check(&l, &g, rect).map_err(err)?;
    let (cut, _) = region_cut(&l, rect).map_err(err)?;
    let inside = |v: usize| {
        let (vx, vy) = l.coords(v);
        (vx + width - rect.x) % width < w && (vy + height - rect.y) % height < h
    };
    let mut on_a = vec![false; l.edge_count()];
    for &e in &cut.side_a {
        on_a[e] = true;
    }
    let edges: Vec<Value> = (0..l.edge_count())
        .map(|e| {
            let (u, v) = l.endpoints(e);
            let (ux, uy) = l.coords(u);
            json!({
                "from": [ux, uy],
                "horizontal": e % 2 == 0,
                "side_a": on_a[e],
                "crossing": inside(u) != inside(v),
            })
        })
        .collect();
    let doc = json!({
        "width": width,
        "height": height,
        "rect": [rect.x, rect.y, w, h],
        "S": report.s,
        "n_ab": report.n_ab,
        "sigma": report.sigma,
        "perimeter": rect.perimeter(),
        "bound_holds": report.bound_holds,
        "edges": edges,
    });
    Ok(doc.to_string())
}

/// Entropy over every bipartition of a graph state, summarized by |A|.
/// The input is the graph file text: `n=<int>` then `u v` per line.
pub fn graph_profile(text: &str) -> Result<String, String> {
    let g = Graph::parse(text).map_err(err)?;
    let n = g.n();
    if n > MAX_PROFILE_SITES {
        return Err(format!("profiles are limited to {MAX_PROFILE_SITES} vertices"));
    }
    if n < 2 {
        return Err("a profile needs at least two vertices".into());
    }
    let mut by_size: Vec<(f64, f64, f64, usize)> = vec![(f64::INFINITY, 0.0, 0.0, 0); n / 2 + 1];
    let mut first = None;
    // |A| ≤ n/2 suffices: the entropy is symmetric under complement
    for mask in 1u64..(1 << n) - 1 {
        let size = mask.count_ones() as usize;
        if size > n / 2 {
            continue;
        }
        let p = Partition::from_mask(n, mask).map_err(err)?;
        let r = graph_entropy(&g, &p).map_err(err)?;
        let s = r.entropy.entropy_bits;
        let slot = &mut by_size[size];
        slot.0 = slot.0.min(s);
        slot.1 = slot.1.max(s);
        slot.2 += s;
        slot.3 += 1;
        first.get_or_insert(r);
    }
    let r = first.expect("n >= 2 gives a nontrivial cut");
    let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
    let rows: Vec<Value> = by_size
        .iter()
        .enumerate()
        .skip(1)
        .map(|(size, &(min, max, sum, count))| {
            json!({ "size": size, "min": min, "max": max, "mean": sum / count as f64, "cuts": count })
        })
        .collect();
    let doc = json!({
        "n": n,
        "edges": g.edges().map(|(u, v)| [u + 1, v + 1]).collect::<Vec<_>>(),
        "v1": one_based(&r.coloring.v1),
        "v2": one_based(&r.coloring.v2),
        "v1_size": r.v1_size,
        "half_n": r.half_n,
        "by_size": rows,
    });
    Ok(doc.to_string())
}

/// Entropy for one cut of a group file, with the n-tangle and the
/// stabilizer completion for qubit groups.
pub fn group_report(text: &str, partition: &str) -> Result<String, String> {
    let file = parse_group_file(text).map_err(err)?;
    let m = BitMatrix::from_rows(file.n, file.d, &file.rows).map_err(err)?;
    let p = Partition::parse(partition, file.n).map_err(err)?;
    if file.d != 2 {
        let g = QuditShiftGroup::from_generators(&m).map_err(err)?;
        let r = qudit_entropy(&g, &p).map_err(err)?;
        let doc = json!({ "n": file.n, "d": file.d, "k": g.k(), "partition": p.to_string(), "entropy": r });
        return Ok(doc.to_string());
    }
    let g = SpinFlipGroup::from_generators(&m).map_err(err)?;
    let r = homogeneous_entropy(&g, &p).map_err(err)?;
    let tangle = ntangle_closed_form(&g).ok().map(|t| t.tau_n);
    let completion: Vec<String> = g
        .stabilizer_completion()
        .generators()
        .iter()
        .map(|s| s.to_string())
        .collect();
    let doc = json!({
        "n": file.n,
        "d": 2,
        "k": g.k(),
        "basis": g.basis_rows().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "partition": p.to_string(),
        "entropy": r,
        "tau_n": tangle,
        "stabilizer": completion,
    });
    Ok(doc.to_string())
}

#[cfg(target_arch = "wasm32")]
mod wasm {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen(js_name = torusRegion)]
    pub fn torus_region(
        width: usize,
        height: usize,
        x: usize,
        y: usize,
        w: usize,
        h: usize,
    ) -> Result<String, JsError> {
        super::torus_region(width, height, x, y, w, h).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = graphProfile)]
    pub fn graph_profile(text: &str) -> Result<String, JsError> {
        super::graph_profile(text).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = groupReport)]
    pub fn group_report(text: &str, partition: &str) -> Result<String, JsError> {
        super::group_report(text, partition).map_err(|e| JsError::new(&e))
    }
}

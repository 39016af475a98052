//! Star operators on a square-lattice torus and rectangular region cuts.
//!
//! Vertex `(x, y)` has index `v = y·W + x`. Edge `2v` joins `(x, y)` to
//! `(x+1, y)` and edge `2v+1` joins `(x, y)` to `(x, y+1)`, indices mod the
//! torus size. One qubit lives on each edge.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::entanglement::{homogeneous_entropy, Partition};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitRow};
use crate::oracle::Oracle;
use crate::spin_flip::SpinFlipGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarLattice {
    width: usize,
    height: usize,
    /// Row `v` is the indicator of the four edges at vertex `v`.
    stars: BitMatrix,
}

/// Rectangle of vertices `x..x+w` × `y..y+h`, wrapping around the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    /// Number of lattice edges on the rectangle's outline.
    pub fn perimeter(&self) -> usize {
        2 * (self.w + self.h)
    }
}

impl FromStr for Rect {
    type Err = Error;

    /// `x,y,w,h` with 0-based corner coordinates.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidRegion(format!("expected x,y,w,h, got {s:?}")))?;
        match parts[..] {
            [x, y, w, h] => Ok(Rect { x, y, w, h }),
            _ => Err(Error::InvalidRegion(format!("expected x,y,w,h, got {s:?}"))),
        }
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x, self.y, self.w, self.h)
    }
}

/// Side A of a rectangular cut together with its boundary counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionCut {
    pub rect: Rect,
    /// Edges with at least one endpoint in the rectangle.
    pub side_a: Vec<usize>,
    /// Edges with exactly one endpoint in the rectangle.
    pub sigma: usize,
    /// Vertices outside the rectangle whose star meets side A.
    pub n_ab: usize,
}

impl StarLattice {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn vertex_count(&self) -> usize {
        self.width * self.height
    }

    pub fn edge_count(&self) -> usize {
        2 * self.vertex_count()
    }

    pub fn vertex(&self, x: usize, y: usize) -> usize {
        (y % self.height) * self.width + x % self.width
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v % self.width, v / self.width)
    }

    pub fn h_edge(&self, x: usize, y: usize) -> usize {
        2 * self.vertex(x, y)
    }

    pub fn v_edge(&self, x: usize, y: usize) -> usize {
        2 * self.vertex(x, y) + 1
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let (x, y) = self.coords(e / 2);
        if e.is_multiple_of(2) {
            (self.vertex(x, y), self.vertex(x + 1, y))
        } else {
            (self.vertex(x, y), self.vertex(x, y + 1))
        }
    }

    pub fn stars(&self) -> &BitMatrix {
        &self.stars
    }

    pub fn star(&self, v: usize) -> &BitRow {
        self.stars.bit_row(v).expect("binary rows")
    }

    /// Non-contractible dual loops: X on every `h(0, y)` (winding vertically)
    /// and on every `v(x, 0)` (winding horizontally). Neither is a product of
    /// stars.
    pub fn loops(&self) -> [BitRow; 2] {
        let e = self.edge_count();
        [
            BitRow::from_indices(e, (0..self.height).map(|y| self.h_edge(0, y))),
            BitRow::from_indices(e, (0..self.width).map(|x| self.v_edge(x, 0))),
        ]
    }

    fn region_mask(&self, r: &Rect) -> Vec<bool> {
        let mut inside = vec![false; self.vertex_count()];
        for j in 0..r.h {
            for i in 0..r.w {
                inside[self.vertex(r.x + i, r.y + j)] = true;
            }
        }
        inside
    }
}

/// Builds the `W × H` torus and the spin-flip group of its stars.
pub fn build_torus(width: usize, height: usize) -> Result<(StarLattice, SpinFlipGroup)> {
    if width < 2 || height < 2 {
        return Err(Error::InvalidLattice(format!(
            "torus needs W, H >= 2, got {width}x{height}"
        )));
    }
    let mut l = StarLattice {
        width,
        height,
        stars: BitMatrix::new(2 * width * height),
    };
    let e = l.edge_count();
    for y in 0..height {
        for x in 0..width {
            let edges = [
                l.h_edge(x, y),
                l.h_edge(x + width - 1, y),
                l.v_edge(x, y),
                l.v_edge(x, y + height - 1),
            ];
            l.stars.push_bit_row(BitRow::from_indices(e, edges))?;
        }
    }
    let group = SpinFlipGroup::from_generators(&l.stars)?;
    Ok((l, group))
}

/// Cut whose side A is every edge touching the rectangle.
pub fn region_cut(l: &StarLattice, rect: Rect) -> Result<(RegionCut, Partition)> {
    if rect.w == 0 || rect.h == 0 {
        return Err(Error::InvalidRegion("rectangle must be nonempty".into()));
    }
    if rect.w >= l.width || rect.h >= l.height {
        return Err(Error::InvalidRegion(format!(
            "{}x{} rectangle wraps a cycle of the {}x{} torus",
            rect.w, rect.h, l.width, l.height
        )));
    }
    let inside = l.region_mask(&rect);
    let mut side_a = Vec::new();
    let mut sigma = 0;
    let mut boundary = vec![false; l.vertex_count()];
    for e in 0..l.edge_count() {
        let (u, v) = l.endpoints(e);
        match (inside[u], inside[v]) {
            (false, false) => {}
            (true, true) => side_a.push(e),
            (iu, _) => {
                side_a.push(e);
                sigma += 1;
                boundary[if iu { v } else { u }] = true;
            }
        }
    }
    let n_ab = boundary.iter().filter(|&&b| b).count();
    let p = Partition::new(l.edge_count(), side_a.iter().copied())?;
    Ok((
        RegionCut {
            rect,
            side_a,
            sigma,
            n_ab,
        },
        p,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArealawReport {
    pub torus: String,
    pub rect: Rect,
    #[serde(rename = "S")]
    pub s: usize,
    pub n_ab: usize,
    pub sigma: usize,
    /// `n_AB − S`, the boundary stars made redundant by dependencies.
    pub offset: i64,
    /// `S ≤ σ`.
    pub bound_holds: bool,
    /// `S = σ`.
    pub saturated: bool,
}

pub fn arealaw_check(l: &StarLattice, g: &SpinFlipGroup, rect: Rect) -> Result<ArealawReport> {
    let (cut, p) = region_cut(l, rect)?;
    let s = homogeneous_entropy(g, &p)?.log2_quotient;
    Ok(ArealawReport {
        torus: format!("{}x{}", l.width, l.height),
        rect,
        s,
        n_ab: cut.n_ab,
        sigma: cut.sigma,
        offset: cut.n_ab as i64 - s as i64,
        bound_holds: s <= cut.sigma,
        saturated: s == cut.sigma,
    })
}

/// Largest lattice (in edges) handed to the dense oracle.
pub const MAX_ORACLE_EDGES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhysicalReport {
    pub torus: String,
    pub rect: Rect,
    /// Oracle entropy of `Σ_w c(w) w|G⟩`.
    pub s_phys: f64,
    /// Rank formula for `|G⟩`.
    pub s_g: f64,
    pub diff: f64,
    pub equal: bool,
    /// Both loops are star-equivalent to operators supported on side B, the
    /// condition under which `S_phys = S_G` is guaranteed.
    pub loops_avoid_region: bool,
}

/// Whether `ℓ ⊕ g` vanishes on side A for some `g ∈ G`, i.e. whether `ℓ_A`
/// lies in the row space of the generators restricted to A.
pub fn loop_avoids(g: &SpinFlipGroup, p: &Partition, ell: &BitRow) -> bool {
    let restricted = g.basis().select_columns(p.side_a());
    let target = ell.select(p.side_a()).to_bits();
    restricted.in_row_space(&target).expect("matching length")
}

/// Coefficients over the loop sectors `[1, ℓ_h, ℓ_v, ℓ_h ℓ_v]`.
pub fn physical_state_entropy_check(
    l: &StarLattice,
    g: &SpinFlipGroup,
    rect: Rect,
    coefficients: [Complex64; 4],
    oracle: &Oracle,
) -> Result<PhysicalReport> {
    if l.edge_count() > MAX_ORACLE_EDGES {
        return Err(Error::GuardExceeded {
            amplitudes: 1u128 << l.edge_count(),
            guard: 1 << MAX_ORACLE_EDGES,
        });
    }
    if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite())
        || coefficients.iter().all(|c| c.norm_sqr() == 0.0)
    {
        return Err(Error::ZeroNorm);
    }
    let (_, p) = region_cut(l, rect)?;
    let [lh, lv] = l.loops();
    let shifts = [BitRow::zeros(l.edge_count()), lh.clone(), lv.clone(), lh.xor(&lv)];
    let terms: Vec<(BitRow, Complex64)> = shifts.into_iter().zip(coefficients).collect();
    let state = oracle.build_shifted_homogeneous(g, &terms)?;
    let s_phys = oracle.entropy(&state, &p)?;
    let s_g = homogeneous_entropy(g, &p)?.entropy_bits;
    let diff = (s_phys - s_g).abs();
    let loops_avoid_region = loop_avoids(g, &p, &lh) && loop_avoids(g, &p, &lv);
    Ok(PhysicalReport {
        torus: format!("{}x{}", l.width, l.height),
        rect,
        s_phys,
        s_g,
        diff,
        equal: diff < 1e-9,
        loops_avoid_region,
    })
}

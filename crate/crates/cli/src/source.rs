use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use gstate::gf2::{is_prime, BitMatrix};
use gstate::spin_flip::parse_group_file;
use gstate::{
    graph_entropy, homogeneous_entropy, qudit_entropy, weighted_bound, weighted_entropy_exact, DenseState, Graph,
    Oracle, Partition, QuditShiftGroup, SpinFlipGroup, WeightedGState,
};
use serde_json::{json, Map, Value};

use crate::SourceArgs;

/// A resolved state source.
pub enum Source {
    Group(SpinFlipGroup),
    Graph(Graph),
    Qudit(QuditShiftGroup),
    /// `⟨X^{⊗n}⟩` over a composite modulus: no rank formula, oracle only.
    CompositeCyclic {
        n: usize,
        d: u32,
    },
    Weighted(WeightedGState),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_grid(spec: &str) -> Result<(usize, usize)> {
    let (r, c) = spec
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("expected RxC, got {spec:?}"))?;
    let r = r.trim().parse().with_context(|| format!("bad row count in {spec:?}"))?;
    let c = c
        .trim()
        .parse()
        .with_context(|| format!("bad column count in {spec:?}"))?;
    if r == 0 || c == 0 {
        bail!("grid {spec:?} has no sites");
    }
    Ok((r, c))
}

/// `WxH` torus dimensions.
pub fn parse_torus(spec: &str) -> Result<(usize, usize)> {
    parse_grid(spec).with_context(|| "parsing --torus")
}

impl Source {
    pub fn resolve(args: &SourceArgs) -> Result<(String, Source)> {
        if let Some(n) = args.ghz {
            if n == 0 {
                bail!("--ghz needs at least one site");
            }
            return Ok((format!("ghz{n}"), Source::Group(SpinFlipGroup::ghz(n))));
        }
        if let Some(n) = args.line {
            if n == 0 {
                bail!("--line needs at least one site");
            }
            return Ok((format!("line{n}"), Source::Graph(Graph::line(n))));
        }
        if let Some(n) = args.ring {
            return Ok((format!("ring{n}"), Source::Graph(Graph::ring(n)?)));
        }
        if let Some(spec) = &args.cluster {
            let (r, c) = parse_grid(spec).context("parsing --cluster")?;
            return Ok((format!("cluster{r}x{c}"), Source::Graph(Graph::cluster(r, c))));
        }
        if let Some(n) = args.cyclic {
            let label = format!("cyclic{n}_d{}", args.dim);
            if n == 0 {
                bail!("--cyclic needs at least one site");
            }
            if args.dim < 2 {
                bail!("--dim must be at least 2");
            }
            if args.dim == 2 {
                return Ok((label, Source::Group(SpinFlipGroup::ghz(n))));
            }
            if !is_prime(args.dim) {
                return Ok((label, Source::CompositeCyclic { n, d: args.dim }));
            }
            return Ok((label, Source::Qudit(gstate::cyclic_group(n, args.dim)?)));
        }
        if let Some(path) = &args.group {
            let text = read(path)?;
            let file = parse_group_file(&text).with_context(|| format!("parsing {}", path.display()))?;
            let m = BitMatrix::from_rows(file.n, file.d, &file.rows)
                .with_context(|| format!("parsing {}", path.display()))?;
            let src = if file.d == 2 {
                Source::Group(SpinFlipGroup::from_generators(&m)?)
            } else {
                Source::Qudit(QuditShiftGroup::from_generators(&m)?)
            };
            return Ok((path.display().to_string(), src));
        }
        if let Some(path) = &args.graph {
            let g = Graph::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            return Ok((path.display().to_string(), Source::Graph(g)));
        }
        if let Some(path) = &args.weighted {
            let w = WeightedGState::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            return Ok((path.display().to_string(), Source::Weighted(w)));
        }
        bail!("no state source given")
    }

    pub fn n(&self) -> usize {
        match self {
            Source::Group(g) => g.n(),
            Source::Graph(g) => g.n(),
            Source::Qudit(g) => g.n(),
            Source::CompositeCyclic { n, .. } => *n,
            Source::Weighted(w) => w.group().n(),
        }
    }

    pub fn d(&self) -> u32 {
        match self {
            Source::Qudit(g) => g.d(),
            Source::CompositeCyclic { d, .. } => *d,
            _ => 2,
        }
    }

    /// A weighted state carries its own cut; everything else needs one.
    pub fn partition(&self, spec: Option<&str>) -> Result<Partition> {
        match (self, spec) {
            (Source::Weighted(w), None) => Ok(w.partition().clone()),
            (Source::Weighted(w), Some(s)) => {
                let p = Partition::parse(s, self.n())?;
                if &p != w.partition() && &p.complement() != w.partition() {
                    bail!(
                        "a weighted state is defined for its own partition {{{}}}",
                        w.partition()
                    );
                }
                Ok(p)
            }
            (_, Some(s)) => Ok(Partition::parse(s, self.n())?),
            (_, None) => bail!("--partition is required for this source"),
        }
    }

    /// Closed-form entropy fields for one cut, or `None` when only the
    /// oracle applies.
    pub fn formula(&self, p: &Partition) -> Result<Option<Map<String, Value>>> {
        let v = match self {
            Source::Group(g) => serde_json::to_value(homogeneous_entropy(g, p)?)?,
            Source::Graph(g) => {
                let mut r = graph_entropy(g, p)?;
                // sites are 1-based on the command line
                for v in r.coloring.v1.iter_mut().chain(r.coloring.v2.iter_mut()) {
                    *v += 1;
                }
                serde_json::to_value(r)?
            }
            Source::Qudit(g) => serde_json::to_value(qudit_entropy(g, p)?)?,
            Source::CompositeCyclic { .. } => return Ok(None),
            Source::Weighted(w) => {
                let mut m = crate::output::object(serde_json::to_value(weighted_entropy_exact(w)?)?);
                m.insert("bound".into(), json!(weighted_bound(w)?));
                Value::Object(m)
            }
        };
        Ok(Some(crate::output::object(v)))
    }

    pub fn dense(&self, o: &Oracle) -> Result<DenseState> {
        Ok(match self {
            Source::Group(g) => o.build_homogeneous(g)?,
            Source::Graph(g) => o.build_graph_state(g)?,
            Source::Qudit(g) => o.build_qudit(g)?,
            Source::CompositeCyclic { n, d } => o.build_cyclic(*n, *d)?,
            Source::Weighted(w) => o.build_weighted(w)?,
        })
    }

    /// The spin-flip group behind a qubit source, with the Hadamard sites
    /// that carry a graph state to it.
    pub fn spin_flip(&self) -> Result<(SpinFlipGroup, Vec<usize>)> {
        match self {
            Source::Group(g) => Ok((g.clone(), Vec::new())),
            Source::Graph(g) => {
                let c = gstate::graph_state::bfs_coloring(g)?;
                Ok(gstate::to_ghomogeneous(g, &c)?)
            }
            Source::Qudit(g) => bail!("the n-tangle needs qubits, got local dimension {}", g.d()),
            Source::CompositeCyclic { d, .. } => bail!("the n-tangle needs qubits, got local dimension {d}"),
            Source::Weighted(_) => bail!("the n-tangle closed form covers homogeneous states only"),
        }
    }
}

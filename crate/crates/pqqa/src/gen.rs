//! Seeded benchmark-instance generators.
//!
//! Five graph families cover the experiments: Erdős–Rényi G(n, p),
//! Barabási–Albert preferential attachment, random regular graphs via the
//! pairing model, queen graphs (n×n board, same row/column/diagonal), and
//! Mycielski graphs (triangle-free with unbounded chromatic number). All
//! generators are deterministic in their seed; identical (params, seed)
//! reproduce the identical graph byte for byte.

use crate::graph::{Graph, GraphError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

/// Graph family tag carried in reports so a run can be reproduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Er,
    Ba,
    Rrg,
    Queen,
    Mycielski,
    Book,
    File,
}

/// Provenance of an instance: family, canonical name, generator seed (if
/// generated), and the parameters needed to rebuild it.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct InstanceMeta {
    pub family: Family,
    pub name: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, String>,
}

/// Errors from generator parameters or from generation itself.
#[derive(Debug, Clone, PartialEq)]
pub enum GenError {
    BadParam { param: String, reason: String },
    OddDegreeSum { n: usize, d: usize },
    Exhausted { attempts: usize },
    MalformedSpec { spec: String, reason: String },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::BadParam { param, reason } => write!(f, "bad parameter `{param}`: {reason}"),
            GenError::OddDegreeSum { n, d } => {
                write!(f, "no {d}-regular graph on {n} nodes: n*d must be even")
            }
            GenError::Exhausted { attempts } => {
                write!(f, "pairing model failed to produce a simple graph after {attempts} attempts")
            }
            GenError::MalformedSpec { spec, reason } => {
                write!(f, "malformed generator spec `{spec}`: {reason}")
            }
        }
    }
}

impl std::error::Error for GenError {}

fn simple(n: usize, pairs: &[(usize, usize)]) -> Graph {
    match Graph::from_pairs(n, pairs) {
        Ok(g) => g,
        Err(e) => unreachable!("generator produced a non-simple graph: {e}"),
    }
}

/// Erdős–Rényi G(n, p): each of the n(n-1)/2 node pairs becomes an edge
/// independently with probability `p`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(GenError::BadParam {
            param: "p".into(),
            reason: format!("edge probability must be in [0, 1], got {p}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    Ok(simple(n, &pairs))
}

/// Barabási–Albert preferential attachment: an m-node seed clique, then
/// each of the remaining n-m nodes attaches to m distinct existing nodes
/// chosen with probability proportional to degree. Adds (n-m)*m edges on
/// top of the seed clique's m(m-1)/2.
pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    if m == 0 || m >= n {
        return Err(GenError::BadParam {
            param: "m".into(),
            reason: format!("need 1 <= m < n, got m={m}, n={n}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    // One entry per edge endpoint; sampling uniformly from this list is
    // sampling nodes proportionally to their degree.
    let mut endpoint_pool: Vec<usize> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            pairs.push((i, j));
            endpoint_pool.push(i);
            endpoint_pool.push(j);
        }
    }
    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for t in m..n {
        targets.clear();
        if endpoint_pool.is_empty() {
            // m = 1 and no edges yet: the only fair choice is uniform.
            targets.push(rng.random_range(0..t));
        } else {
            while targets.len() < m {
                let cand = endpoint_pool[rng.random_range(0..endpoint_pool.len())];
                if !targets.contains(&cand) {
                    targets.push(cand);
                }
            }
        }
        for &u in &targets {
            pairs.push((u, t));
            endpoint_pool.push(u);
            endpoint_pool.push(t);
        }
    }
    Ok(simple(n, &pairs))
}

const RRG_MAX_RESTARTS: usize = 1000;

/// Random d-regular graph via the pairing model: d stubs per node are
/// shuffled and paired off; any self-loop or repeated pair triggers a
/// full restart. Fails after 1000 restarts (practically unreachable for
/// the sparse regimes used here).
pub fn gen_rrg(n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    if d >= n {
        return Err(GenError::BadParam {
            param: "d".into(),
            reason: format!("degree must satisfy d < n, got d={d}, n={n}"),
        });
    }
    if !(n * d).is_multiple_of(2) {
        return Err(GenError::OddDegreeSum { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'restart: for _ in 0..RRG_MAX_RESTARTS {
        // Fisher-Yates; rand's shuffle would work too, spelled out so the
        // stream consumption is obvious.
        for i in (1..stubs.len()).rev() {
            stubs.swap(i, rng.random_range(0..=i));
        }
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n * d / 2);
        for chunk in stubs.chunks_exact(2) {
            let (a, b) = (chunk[0], chunk[1]);
            if a == b {
                continue 'restart;
            }
            let key = if a < b { (a, b) } else { (b, a) };
            pairs.push(key);
        }
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            continue 'restart;
        }
        return Ok(simple(n, &pairs));
    }
    Err(GenError::Exhausted { attempts: RRG_MAX_RESTARTS })
}

/// Queen graph on an n×n board: one node per square, an edge whenever two
/// squares share a row, column, or diagonal (queen moves).
pub fn gen_queen(n: usize) -> Graph {
    let idx = |r: usize, c: usize| r * n + c;
    let mut pairs = Vec::new();
    for r1 in 0..n {
        for c1 in 0..n {
            for r2 in 0..n {
                for c2 in 0..n {
                    let (a, b) = (idx(r1, c1), idx(r2, c2));
                    if a >= b {
                        continue;
                    }
                    let same_row = r1 == r2;
                    let same_col = c1 == c2;
                    let same_diag = r1.abs_diff(r2) == c1.abs_diff(c2);
                    if same_row || same_col || same_diag {
                        pairs.push((a, b));
                    }
                }
            }
        }
    }
    simple(n * n, &pairs)
}

/// Mycielski graph `k`: `k = 2` is a single edge; for `k >= 3` the
/// Mycielski construction is applied `k - 1` times to the single edge,
/// matching the standard benchmark family (k = 5 gives 47 nodes and 236
/// edges, k = 6 gives 95 and 755). Every member is triangle-free, and the
/// required number of colors grows by one per construction step.
pub fn gen_mycielski(k: usize) -> Result<Graph, GenError> {
    if k < 2 {
        return Err(GenError::BadParam {
            param: "k".into(),
            reason: format!("need k >= 2, got {k}"),
        });
    }
    let mut n = 2usize;
    let mut pairs: Vec<(usize, usize)> = vec![(0, 1)];
    let steps = if k == 2 { 0 } else { k - 1 };
    for _ in 0..steps {
        // Nodes 0..n keep their edges; shadow node n+i sees the original
        // neighborhood of i; apex node 2n sees every shadow node.
        let mut next: Vec<(usize, usize)> = pairs.clone();
        for &(u, v) in &pairs {
            next.push((n + u, v));
            next.push((u, n + v));
        }
        let apex = 2 * n;
        for i in 0..n {
            next.push((n + i, apex));
        }
        pairs = next;
        n = 2 * n + 1;
    }
    Ok(simple(n, &pairs))
}

/// Parses an inline generator spec like `er:n=700,p=0.15,seed=7` and
/// builds the graph plus its provenance record. Recognized families:
/// `er(n,p)`, `ba(n,m)`, `rrg(n,d)`, `queen(n)`, `mycielski(k)`. `seed`
/// defaults to 0 and is ignored by the deterministic families.
pub fn build_from_spec(spec: &str) -> Result<(Graph, InstanceMeta), GenError> {
    let malformed = |reason: &str| GenError::MalformedSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    let (family, rest) = spec.split_once(':').ok_or_else(|| malformed("expected `family:k=v,...`"))?;
    let mut params: BTreeMap<String, String> = BTreeMap::new();
    for part in rest.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| malformed(&format!("expected `key=value`, got `{part}`")))?;
        if params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(malformed(&format!("repeated key `{}`", k.trim())));
        }
    }
    let get_usize = |key: &str| -> Result<usize, GenError> {
        params
            .get(key)
            .ok_or_else(|| malformed(&format!("missing `{key}`")))?
            .parse::<usize>()
            .map_err(|_| malformed(&format!("`{key}` must be a non-negative integer")))
    };
    let get_f64 = |key: &str| -> Result<f64, GenError> {
        params
            .get(key)
            .ok_or_else(|| malformed(&format!("missing `{key}`")))?
            .parse::<f64>()
            .map_err(|_| malformed(&format!("`{key}` must be a real number")))
    };
    let seed = match params.get("seed") {
        Some(s) => s
            .parse::<u64>()
            .map_err(|_| malformed("`seed` must be an unsigned integer"))?,
        None => 0,
    };
    let expect_keys = |allowed: &[&str]| -> Result<(), GenError> {
        for k in params.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(malformed(&format!("unknown key `{k}`")));
            }
        }
        Ok(())
    };
    let (graph, fam, seeded) = match family {
        "er" => {
            expect_keys(&["n", "p", "seed"])?;
            (gen_er(get_usize("n")?, get_f64("p")?, seed)?, Family::Er, true)
        }
        "ba" => {
            expect_keys(&["n", "m", "seed"])?;
            (gen_ba(get_usize("n")?, get_usize("m")?, seed)?, Family::Ba, true)
        }
        "rrg" => {
            expect_keys(&["n", "d", "seed"])?;
            (gen_rrg(get_usize("n")?, get_usize("d")?, seed)?, Family::Rrg, true)
        }
        "queen" => {
            expect_keys(&["n", "seed"])?;
            (gen_queen(get_usize("n")?), Family::Queen, false)
        }
        "mycielski" => {
            expect_keys(&["k", "seed"])?;
            (gen_mycielski(get_usize("k")?)?, Family::Mycielski, false)
        }
        other => return Err(malformed(&format!("unknown family `{other}`"))),
    };
    let meta = InstanceMeta {
        family: fam,
        name: spec.to_string(),
        seed: if seeded { Some(seed) } else { None },
        params,
    };
    Ok((graph, meta))
}

impl From<GraphError> for GenError {
    fn from(e: GraphError) -> Self {
        GenError::BadParam { param: "graph".into(), reason: e.to_string() }
    }
}

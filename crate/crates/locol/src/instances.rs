//! Planted-solution instance generators, the clique gadget, and
//! exponential-time oracles for ground truth on tiny instances.
//!
//! All randomness comes from ChaCha8 seeded explicitly, so generated
//! corpora are byte-identical across runs and platforms.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SolveError;
use crate::hypergraph::{verify_lo_colouring, Colouring, Edge, Hypergraph};

#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub hypergraph: Hypergraph,
    /// Hidden 0/1 witness: every edge has exactly one 1-vertex.
    pub planted: Colouring,
}

/// Generates a 3-uniform hypergraph around a hidden LO 2-colouring:
/// each edge takes one planted-1 vertex and two distinct planted-0
/// vertices, sampled by rejection with a dedup set.
pub fn gen_planted(
    n: usize,
    m: usize,
    ones_fraction: f64,
    seed: u64,
) -> Result<PlantedInstance, SolveError> {
    assert!(n >= 3, "need at least 3 vertices");
    assert!(
        ones_fraction > 0.0 && ones_fraction < 1.0,
        "ones_fraction must be in (0,1)"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut planted: Vec<u32> = (0..n)
        .map(|_| u32::from(rng.random_bool(ones_fraction)))
        .collect();
    // Force at least one 1 and two 0s.
    if !planted.contains(&1) {
        planted[0] = 1;
    }
    while planted.iter().filter(|&&c| c == 0).count() < 2 {
        let idx = planted.iter().rposition(|&c| c == 1).expect("has ones");
        planted[idx] = 0;
    }
    let ones: Vec<u32> = (1..=n as u32).filter(|&v| planted[v as usize - 1] == 1).collect();
    let zeros: Vec<u32> = (1..=n as u32).filter(|&v| planted[v as usize - 1] == 0).collect();
    let available = ones.len() * zeros.len() * (zeros.len() - 1) / 2;
    if m > available {
        return Err(SolveError::InfeasibleGenerator {
            requested: m,
            available,
        });
    }
    let mut seen: HashSet<[u32; 3]> = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let one = ones[rng.random_range(0..ones.len())];
        let a = zeros[rng.random_range(0..zeros.len())];
        let b = zeros[rng.random_range(0..zeros.len())];
        if a == b {
            continue;
        }
        let mut key = [one, a, b];
        key.sort_unstable();
        if seen.insert(key) {
            edges.push(Edge::new(key.to_vec()).expect("distinct"));
        }
    }
    let hypergraph = Hypergraph::new(n, edges, true).expect("in-range");
    let planted = Colouring::from_assignment(planted);
    debug_assert!(verify_lo_colouring(&hypergraph, &planted).valid);
    Ok(PlantedInstance {
        hypergraph,
        planted,
    })
}

/// The related-work gadget: vertices v_1..v_k plus one w per unordered
/// pair, edges (v_i, v_j, w_ij). LO 2-colourable via v -> 0, w -> 1.
pub fn gen_clique_gadget(k: usize) -> Hypergraph {
    assert!(k >= 2);
    let mut edges = Vec::with_capacity(k * (k - 1) / 2);
    let mut next_w = k as u32 + 1;
    for i in 1..=k as u32 {
        for j in i + 1..=k as u32 {
            edges.push(Edge::new(vec![i, j, next_w]).expect("distinct"));
            next_w += 1;
        }
    }
    let n = k + k * (k - 1) / 2;
    Hypergraph::new(n, edges, true).expect("in-range")
}

/// All LO 2-colourings of `h`, as 0/1 assignments. Exhaustive; caller
/// keeps n small.
pub fn enumerate_lo2(h: &Hypergraph) -> Vec<Vec<u32>> {
    let n = h.n();
    assert!(n <= 24, "enumeration limited to small instances");
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let assignment: Vec<u32> = (0..n).map(|i| mask >> i & 1).collect();
        let ok = h.edges().iter().all(|e| {
            e.vertices()
                .iter()
                .filter(|&&v| assignment[v as usize - 1] == 1)
                .count()
                == 1
        });
        if ok {
            out.push(assignment);
        }
    }
    out
}

/// Minimum number of colours of any LO colouring within `colour_budget`
/// colours, or `None` if no valid colouring fits the budget.
pub fn brute_force_min_lo(h: &Hypergraph, colour_budget: u32) -> Result<Option<u32>, SolveError> {
    let n = h.n();
    if n > 10 {
        return Err(SolveError::InstanceTooLarge(n));
    }
    if n == 0 {
        return Ok(Some(0));
    }
    for k in 1..=colour_budget {
        if exists_lo_colouring(h, k) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn exists_lo_colouring(h: &Hypergraph, k: u32) -> bool {
    fn search(h: &Hypergraph, k: u32, assignment: &mut Vec<u32>) -> bool {
        let v = assignment.len();
        if v == h.n() {
            return true;
        }
        'colour: for c in 0..k {
            assignment.push(c);
            // Check every edge now fully assigned, and prune edges whose
            // assigned maximum is already tied with no larger vertex left.
            for e in h.edges() {
                let mut max = 0u32;
                let mut max_count = 0;
                let mut unassigned = 0;
                for &x in e.vertices() {
                    if (x as usize) <= assignment.len() {
                        let cx = assignment[x as usize - 1];
                        if max_count == 0 || cx > max {
                            max = cx;
                            max_count = 1;
                        } else if cx == max {
                            max_count += 1;
                        }
                    } else {
                        unassigned += 1;
                    }
                }
                if unassigned == 0 && max_count != 1 {
                    assignment.pop();
                    continue 'colour;
                }
            }
            if search(h, k, assignment) {
                return true;
            }
            assignment.pop();
        }
        false
    }
    search(h, k, &mut Vec::with_capacity(h.n()))
}

//! The mod-2 pipeline: preprocessing fixpoint, derandomized inner step,
//! the vertex-halving solver and the edge-quartering variant, plus the
//! brute-force base case.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::error::SolveError;
use crate::gf2::{evaluate, fixed_coordinates, incidence_system, solve_affine, BitVec};
use crate::hypergraph::{verify_lo_colouring, Colouring, Edge, Hypergraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreStatus {
    Ok,
    NotLo2Colourable,
}

/// Outcome of the preprocessing fixpoint. Vertex ids refer to the input
/// hypergraph; the residual is re-indexed, with `residual_vertices`
/// mapping its local ids (1-based) back.
#[derive(Debug, Clone)]
pub struct PreprocessResult {
    pub fixed0: Vec<u32>,
    pub fixed1: Vec<u32>,
    pub residual: Hypergraph,
    pub residual_vertices: Vec<u32>,
    pub status: PreStatus,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub colouring: Colouring,
    pub colours_used: usize,
    pub iterations: usize,
    pub brute_forced_vertices: usize,
    pub elapsed: Duration,
    /// Edge-variant only: count of fully-uncoloured edges at the start
    /// of each iteration.
    pub full_edge_history: Vec<usize>,
}

pub(crate) struct SubInstance {
    pub h: Hypergraph,
    /// local id (1-based) -> original id
    pub orig: Vec<u32>,
}

pub(crate) fn compact(verts: &[u32], edges: &[Vec<u32>]) -> SubInstance {
    let mut orig = verts.to_vec();
    orig.sort_unstable();
    orig.dedup();
    let index: HashMap<u32, u32> = orig
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32 + 1))
        .collect();
    let local_edges = edges
        .iter()
        .map(|e| Edge::new(e.iter().map(|v| index[v]).collect()).expect("valid edge"))
        .collect();
    let h = Hypergraph::new(orig.len(), local_edges, false).expect("in-range");
    SubInstance { h, orig }
}

/// Repeatedly solves `Av = 1^m`, records every coordinate the system
/// fixes, propagates (a vertex fixed to 1 forces its edge partners to
/// 0), shrinks edges by their fixed-0 vertices and drops resolved
/// edges, until no coordinate is fixed.
pub fn preprocess(h: &Hypergraph) -> PreprocessResult {
    let n = h.n();
    let mut fixed: Vec<Option<bool>> = vec![None; n + 1];
    let mut edges: Vec<Vec<u32>> = h.edges().iter().map(|e| e.vertices().to_vec()).collect();

    let failed = |fixed: &[Option<bool>]| PreprocessResult {
        fixed0: collect_fixed(fixed, false),
        fixed1: collect_fixed(fixed, true),
        residual: Hypergraph::new(0, vec![], false).unwrap(),
        residual_vertices: vec![],
        status: PreStatus::NotLo2Colourable,
    };

    loop {
        let unfixed: Vec<u32> = (1..=n as u32).filter(|&v| fixed[v as usize].is_none()).collect();
        let sub = compact(&unfixed, &edges);
        let (a, b) = incidence_system(&sub.h);
        let Some(space) = solve_affine(&a, &b) else {
            return failed(&fixed);
        };
        let newly = fixed_coordinates(&space);
        if newly.is_empty() {
            let residual = sub.h;
            debug_assert!(residual.edges().iter().all(|e| e.len() == 2 || e.len() == 3));
            return PreprocessResult {
                fixed0: collect_fixed(&fixed, false),
                fixed1: collect_fixed(&fixed, true),
                residual,
                residual_vertices: sub.orig,
                status: PreStatus::Ok,
            };
        }
        let mut worklist: Vec<(u32, bool)> = newly
            .into_iter()
            .map(|(x, bit)| (sub.orig[x], bit))
            .collect();
        if propagate(&mut edges, &mut fixed, &mut worklist).is_err() {
            return failed(&fixed);
        }
    }
}

fn collect_fixed(fixed: &[Option<bool>], bit: bool) -> Vec<u32> {
    (1..fixed.len() as u32)
        .filter(|&v| fixed[v as usize] == Some(bit))
        .collect()
}

/// Applies a batch of fixings to the live edge list, cascading forced
/// values. Errors on any contradiction.
fn propagate(
    edges: &mut Vec<Vec<u32>>,
    fixed: &mut [Option<bool>],
    worklist: &mut Vec<(u32, bool)>,
) -> Result<(), ()> {
    for &(v, bit) in worklist.iter() {
        match fixed[v as usize] {
            None => fixed[v as usize] = Some(bit),
            Some(b) if b == bit => {}
            Some(_) => return Err(()),
        }
    }
    while let Some((v, bit)) = worklist.pop() {
        let mut idx = 0;
        while idx < edges.len() {
            if !edges[idx].contains(&v) {
                idx += 1;
                continue;
            }
            if bit {
                // v carries the edge's unique 1; partners drop to 0.
                for &u in edges[idx].iter().filter(|&&u| u != v) {
                    match fixed[u as usize] {
                        Some(true) => return Err(()),
                        Some(false) => {}
                        None => {
                            fixed[u as usize] = Some(false);
                            worklist.push((u, false));
                        }
                    }
                }
                edges.swap_remove(idx);
            } else {
                edges[idx].retain(|&u| u != v);
                match edges[idx].len() {
                    0 => return Err(()),
                    1 => {
                        let u = edges[idx][0];
                        match fixed[u as usize] {
                            Some(false) => return Err(()),
                            Some(true) => {}
                            None => {
                                fixed[u as usize] = Some(true);
                                worklist.push((u, true));
                            }
                        }
                        edges.swap_remove(idx);
                    }
                    _ => idx += 1,
                }
            }
        }
    }
    Ok(())
}

/// Halving step: a deterministic zero-set `T` of some solution of
/// `Av = 1^m`, with `|T| >= n/2`. `T` meets every size-3 edge in 0 or 2
/// vertices and every size-2 edge in exactly 1.
///
/// Contract: the caller has preprocessed, so the system is consistent
/// and fixes no variable; both are asserted.
pub fn inner_step(h: &Hypergraph) -> Vec<u32> {
    let (a, b) = incidence_system(h);
    let space = solve_affine(&a, &b).expect("inner_step: inconsistent system");
    let n = h.n();
    // Index of the last basis vector touching each coordinate; the
    // coordinate's value becomes final once that coefficient is chosen.
    let mut last = vec![usize::MAX; n];
    for (i, v) in space.basis.iter().enumerate() {
        for x in 0..n {
            if v.get(x) {
                last[x] = i;
            }
        }
    }
    assert!(
        last.iter().all(|&l| l != usize::MAX),
        "inner_step: system fixes a variable"
    );
    let mut determined: Vec<Vec<usize>> = vec![Vec::new(); space.dim()];
    for x in 0..n {
        determined[last[x]].push(x);
    }
    let mut current = space.v0.clone();
    for (i, group) in determined.iter().enumerate() {
        let zeros_if_unset = group.iter().filter(|&&x| !current.get(x)).count();
        // Each coordinate in the group flips with a_i, so the counts swap.
        if group.len() - zeros_if_unset > zeros_if_unset {
            current.xor_assign(&space.basis[i]);
        }
    }
    (0..n)
        .filter(|&x| !current.get(x))
        .map(|x| x as u32 + 1)
        .collect()
}

/// Exhaustively searches for a 0/1 colouring giving every edge exactly
/// one 1. Only called on instances the caller has bounded in size.
pub fn brute_force_lo2(h: &Hypergraph) -> Option<Colouring> {
    let n = h.n();
    let m = h.m();
    // Per-edge counters maintained along the search.
    let mut ones = vec![0u8; m];
    let mut unassigned: Vec<u8> = h.edges().iter().map(|e| e.len() as u8).collect();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, e) in h.edges().iter().enumerate() {
        for &v in e.vertices() {
            touching[v as usize - 1].push(j);
        }
    }
    let mut assignment = vec![false; n];

    fn search(
        v: usize,
        n: usize,
        assignment: &mut [bool],
        ones: &mut [u8],
        unassigned: &mut [u8],
        touching: &[Vec<usize>],
    ) -> bool {
        if v == n {
            return ones.iter().all(|&o| o == 1);
        }
        'choice: for &bit in &[false, true] {
            for &j in &touching[v] {
                let o = ones[j] + bit as u8;
                let u = unassigned[j] - 1;
                if o > 1 || (u == 0 && o != 1) || (o == 0 && u == 0) {
                    continue 'choice;
                }
            }
            assignment[v] = bit;
            for &j in &touching[v] {
                ones[j] += bit as u8;
                unassigned[j] -= 1;
            }
            if search(v + 1, n, assignment, ones, unassigned, touching) {
                return true;
            }
            for &j in &touching[v] {
                ones[j] -= bit as u8;
                unassigned[j] += 1;
            }
        }
        false
    }

    if search(0, n, &mut assignment, &mut ones, &mut unassigned, &touching) {
        Some(Colouring::from_assignment(
            assignment.iter().map(|&b| b as u32).collect(),
        ))
    } else {
        None
    }
}

pub const DEFAULT_BRUTE_THRESHOLD: usize = 20;

/// Largest accepted brute-force threshold for an instance of `n`
/// vertices; anything up to O(log n) keeps the solver polynomial.
pub fn brute_threshold_limit(n: usize) -> usize {
    let log = usize::BITS - n.max(2).leading_zeros();
    DEFAULT_BRUTE_THRESHOLD.max(4 * log as usize)
}

/// Vertex-halving solver: repeatedly preprocess, take the zero set `T`,
/// colour it with the current colour and discard it, until at most
/// `brute_threshold` vertices remain; those get brute-forced with the
/// two final colours. Vertices fixed to 1 along the way share the
/// global top colour.
pub fn solve_mod2(h: &Hypergraph, brute_threshold: usize) -> Result<SolveReport, SolveError> {
    let limit = brute_threshold_limit(h.n());
    if brute_threshold == 0 || brute_threshold > limit {
        return Err(SolveError::BadThreshold {
            given: brute_threshold,
            limit,
        });
    }
    let start = Instant::now();
    let n = h.n();
    let mut colouring = Colouring::uncoloured(n);
    let mut deferred1: Vec<u32> = Vec::new();
    let mut verts: Vec<u32> = (1..=n as u32).collect();
    let mut edges: Vec<Vec<u32>> = h.edges().iter().map(|e| e.vertices().to_vec()).collect();
    let mut colour = 0u32;
    let mut iterations = 0usize;
    let brute_forced_vertices;

    loop {
        iterations += 1;
        let sub = compact(&verts, &edges);
        let pre = preprocess(&sub.h);
        if pre.status == PreStatus::NotLo2Colourable {
            return Err(SolveError::NotLo2Colourable);
        }
        for &lv in &pre.fixed0 {
            colouring.set(sub.orig[lv as usize - 1], colour);
        }
        for &lv in &pre.fixed1 {
            deferred1.push(sub.orig[lv as usize - 1]);
        }
        let res_orig: Vec<u32> = pre
            .residual_vertices
            .iter()
            .map(|&lv| sub.orig[lv as usize - 1])
            .collect();

        if pre.residual.n() <= brute_threshold {
            let Some(base) = brute_force_lo2(&pre.residual) else {
                return Err(SolveError::NotLo2Colourable);
            };
            for (lv, bit) in base.iter() {
                let orig = res_orig[lv as usize - 1];
                colouring.set(orig, colour + bit.expect("complete"));
            }
            brute_forced_vertices = pre.residual.n();
            let top = colour + 1;
            for &v in &deferred1 {
                colouring.set(v, top);
            }
            break;
        }

        let t = inner_step(&pre.residual);
        let mut in_t = vec![false; pre.residual.n() + 1];
        for &lv in &t {
            in_t[lv as usize] = true;
            colouring.set(res_orig[lv as usize - 1], colour);
        }
        verts.clear();
        for lv in 1..=pre.residual.n() as u32 {
            if !in_t[lv as usize] {
                verts.push(res_orig[lv as usize - 1]);
            }
        }
        edges = pre
            .residual
            .edges()
            .iter()
            .filter(|e| e.vertices().iter().all(|&lv| !in_t[lv as usize]))
            .map(|e| {
                e.vertices()
                    .iter()
                    .map(|&lv| res_orig[lv as usize - 1])
                    .collect()
            })
            .collect();
        colour += 1;
    }

    debug_assert!(verify_lo_colouring(h, &colouring).valid);
    Ok(SolveReport {
        colours_used: colouring.colours_used(),
        colouring,
        iterations,
        brute_forced_vertices,
        elapsed: start.elapsed(),
        full_edge_history: Vec::new(),
    })
}

/// Edge-quartering solver: iterate while some edge still has all three
/// vertices uncoloured; the derandomization minimises the expected
/// number of such edges surviving (the all-ones pattern). Leftover
/// vertices get one sweep colour, deferred fixed-1 vertices the top.
pub fn solve_mod2_edges(h: &Hypergraph) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    let n = h.n();
    let mut colouring = Colouring::uncoloured(n);
    let mut deferred1: Vec<u32> = Vec::new();
    let mut colour = 0u32;
    let mut iterations = 0usize;
    let mut history = Vec::new();

    loop {
        let full: Vec<Vec<u32>> = h
            .edges()
            .iter()
            .filter(|e| e.vertices().iter().all(|&v| colouring.get(v).is_none()))
            .map(|e| e.vertices().to_vec())
            .collect();
        history.push(full.len());
        if full.is_empty() {
            break;
        }
        iterations += 1;
        let verts: Vec<u32> = {
            let mut vs: Vec<u32> = full.iter().flatten().copied().collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        };
        let sub = compact(&verts, &full);
        let pre = preprocess(&sub.h);
        if pre.status == PreStatus::NotLo2Colourable {
            return Err(SolveError::NotLo2Colourable);
        }
        for &lv in &pre.fixed0 {
            colouring.set(sub.orig[lv as usize - 1], colour);
        }
        for &lv in &pre.fixed1 {
            deferred1.push(sub.orig[lv as usize - 1]);
        }
        if pre.residual.m() > 0 {
            let v = edge_min_solution(&pre.residual);
            for lv in 0..pre.residual.n() {
                if !v.get(lv) {
                    let orig = sub.orig[pre.residual_vertices[lv] as usize - 1];
                    colouring.set(orig, colour);
                }
            }
        }
        colour += 1;
    }

    let mut next = colour;
    let uncoloured: Vec<u32> = colouring
        .iter()
        .filter(|(_, c)| c.is_none())
        .map(|(v, _)| v)
        .collect();
    let deferred_set: std::collections::HashSet<u32> = deferred1.iter().copied().collect();
    let sweep: Vec<u32> = uncoloured
        .into_iter()
        .filter(|v| !deferred_set.contains(v))
        .collect();
    if !sweep.is_empty() {
        for &v in &sweep {
            colouring.set(v, next);
        }
        next += 1;
    }
    for &v in &deferred1 {
        colouring.set(v, next);
    }

    debug_assert!(verify_lo_colouring(h, &colouring).valid);
    Ok(SolveReport {
        colours_used: colouring.colours_used(),
        colouring,
        iterations,
        brute_forced_vertices: 0,
        elapsed: start.elapsed(),
        full_edge_history: history,
    })
}

/// Conditional-expectations choice of a solution to `Av = 1^m`
/// minimising the number of size-3 edges whose vertices all evaluate
/// to 1. Requires a preprocessed (consistent, nothing fixed) system.
fn edge_min_solution(h: &Hypergraph) -> BitVec {
    let (a, b) = incidence_system(h);
    let space = solve_affine(&a, &b).expect("edge step: inconsistent system");
    let r = space.dim();

    // For edge vertex t, all-ones means <a, row_t> = 1 XOR v0_t over
    // the basis coefficients. `targets` holds the running right-hand
    // side as earlier coefficients get fixed.
    struct EdgeSys {
        rows: [BitVec; 3],
        targets: [bool; 3],
    }
    let mut systems: Vec<EdgeSys> = h
        .edges()
        .iter()
        .filter(|e| e.len() == 3)
        .map(|e| {
            let row = |t: u32| {
                let x = t as usize - 1;
                let mut v = BitVec::zeros(r);
                for (j, basis) in space.basis.iter().enumerate() {
                    if basis.get(x) {
                        v.set(j, true);
                    }
                }
                v
            };
            let vs = e.vertices();
            EdgeSys {
                rows: [row(vs[0]), row(vs[1]), row(vs[2])],
                targets: [
                    !space.v0.get(vs[0] as usize - 1),
                    !space.v0.get(vs[1] as usize - 1),
                    !space.v0.get(vs[2] as usize - 1),
                ],
            }
        })
        .collect();

    // Probability (times 8) that one edge's all-ones system is still
    // satisfiable over the not-yet-fixed coefficients.
    fn score8(sys: &EdgeSys, from: usize, r: usize) -> u32 {
        let mut rows: Vec<(BitVec, bool)> = sys
            .rows
            .iter()
            .zip(sys.targets)
            .map(|(row, t)| (row.clone(), t))
            .collect();
        let mut rank = 0u32;
        for i in 0..3 {
            let Some(pivot) = (from..r).find(|&c| rows[i].0.get(c)) else {
                if rows[i].1 {
                    return 0; // inconsistent
                }
                continue;
            };
            rank += 1;
            for j in i + 1..3 {
                if rows[j].0.get(pivot) {
                    let (lo, hi) = rows.split_at_mut(j);
                    hi[0].0.xor_assign(&lo[i].0);
                    hi[0].1 ^= lo[i].1;
                }
            }
        }
        8 >> rank
    }

    let mut coeffs = vec![false; r];
    for i in 0..r {
        let mut totals = [0u64; 2];
        for sys in &systems {
            for choice in 0..2 {
                let mut probe = EdgeSys {
                    rows: sys.rows.clone(),
                    targets: sys.targets,
                };
                if choice == 1 {
                    for t in 0..3 {
                        if probe.rows[t].get(i) {
                            probe.targets[t] = !probe.targets[t];
                        }
                    }
                }
                totals[choice] += score8(&probe, i + 1, r) as u64;
            }
        }
        let pick_one = totals[1] < totals[0];
        coeffs[i] = pick_one;
        if pick_one {
            for sys in &mut systems {
                for t in 0..3 {
                    if sys.rows[t].get(i) {
                        sys.targets[t] = !sys.targets[t];
                    }
                }
            }
        }
    }
    evaluate(&space, &coeffs)
}

//! Graph utilities shared by the decision procedures: reachability, Tarjan
//! SCCs, and enumeration of loops (strongly connected subsets supporting a
//! closed walk).

use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Forward reachability from `start` (reflexive).
pub fn reachable(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// States from which some state of `targets` is reachable (reflexive).
pub fn can_reach(adj: &[Vec<usize>], targets: &[bool]) -> Vec<bool> {
    let n = adj.len();
    let mut radj = vec![Vec::new(); n];
    for (v, succs) in adj.iter().enumerate() {
        for &w in succs {
            radj[w].push(v);
        }
    }
    let mut seen = targets.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&v| targets[v]).collect();
    while let Some(v) = stack.pop() {
        for &w in &radj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Tarjan strongly connected components, returned in reverse topological
/// order. Singleton components without a self-loop are still reported.
pub fn sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0usize;
    let mut out = Vec::new();

    // Iterative Tarjan to avoid recursion depth limits.
    enum Frame {
        Enter(usize),
        Continue(usize, usize),
    }
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call = vec![Frame::Enter(root)];
        while let Some(frame) = call.pop() {
            match frame {
                Frame::Enter(v) => {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push(Frame::Continue(v, 0));
                }
                Frame::Continue(v, mut i) => {
                    let mut descended = false;
                    while i < adj[v].len() {
                        let w = adj[v][i];
                        i += 1;
                        if index[w] == usize::MAX {
                            call.push(Frame::Continue(v, i));
                            call.push(Frame::Enter(w));
                            descended = true;
                            break;
                        } else if on_stack[w] {
                            low[v] = low[v].min(index[w]);
                        }
                    }
                    if descended {
                        continue;
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        out.push(comp);
                    } else {
                        // Propagate lowlink to the parent frame.
                        if let Some(Frame::Continue(p, _)) = call.last() {
                            let p = *p;
                            low[p] = low[p].min(low[v]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// True iff the subgraph induced by `subset` is strongly connected and
/// supports a closed walk visiting every member (for singletons this needs a
/// self-loop).
pub fn is_loop(adj: &[Vec<usize>], subset: &BTreeSet<usize>) -> bool {
    if subset.is_empty() {
        return false;
    }
    let members: Vec<usize> = subset.iter().copied().collect();
    if members.len() == 1 {
        let v = members[0];
        return adj[v].contains(&v);
    }
    // Strong connectivity of the induced subgraph.
    let pos = |v: usize| members.binary_search(&v).ok();
    let induced: Vec<Vec<usize>> = members
        .iter()
        .map(|&v| adj[v].iter().filter_map(|&w| pos(w)).collect())
        .collect();
    let fwd = reachable(&induced, 0);
    if !fwd.iter().all(|&b| b) {
        return false;
    }
    let mut rev = vec![Vec::new(); members.len()];
    for (v, succs) in induced.iter().enumerate() {
        for &w in succs {
            rev[w].push(v);
        }
    }
    reachable(&rev, 0).iter().all(|&b| b)
}

/// Default cap on the size of a strongly connected component whose subsets
/// are enumerated when listing loops.
pub const LOOP_ENUM_SCC_MAX: usize = 22;

/// All loops of the graph restricted to `alive` states, i.e. all non-empty
/// subsets inducing a strongly connected subgraph with a closed walk.
///
/// Enumeration works per SCC; an SCC larger than `scc_cap` yields a capacity
/// error rather than a silently wrong or unbounded answer.
pub fn enumerate_loops(
    adj: &[Vec<usize>],
    alive: &[bool],
    scc_cap: usize,
) -> Result<Vec<BTreeSet<usize>>> {
    let filtered: Vec<Vec<usize>> = adj
        .iter()
        .enumerate()
        .map(|(v, succs)| {
            if alive[v] {
                succs.iter().copied().filter(|&w| alive[w]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut out = Vec::new();
    for comp in sccs(&filtered) {
        let comp: Vec<usize> = comp.into_iter().filter(|&v| alive[v]).collect();
        if comp.is_empty() {
            continue;
        }
        if comp.len() == 1 {
            let v = comp[0];
            if filtered[v].contains(&v) {
                out.push(BTreeSet::from([v]));
            }
            continue;
        }
        if comp.len() > scc_cap {
            return Err(Error::Capacity(
                format!("loop enumeration over an SCC of {} states", comp.len()),
                scc_cap,
            ));
        }
        let mut members = comp.clone();
        members.sort_unstable();
        for mask in 1u64..(1u64 << members.len()) {
            let subset: BTreeSet<usize> = members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            if is_loop(&filtered, &subset) {
                out.push(subset);
            }
        }
    }
    Ok(out)
}

fn restrict(adj: &[Vec<usize>], allowed: &[bool]) -> Vec<Vec<usize>> {
    adj.iter()
        .enumerate()
        .map(|(v, succs)| {
            if allowed[v] {
                succs.iter().copied().filter(|&w| allowed[w]).collect()
            } else {
                Vec::new()
            }
        })
        .collect()
}

/// Nontrivial SCCs of the `allowed` subgraph (supporting a closed walk).
pub fn component_loops(adj: &[Vec<usize>], allowed: &[bool]) -> Vec<BTreeSet<usize>> {
    let filtered = restrict(adj, allowed);
    sccs(&filtered)
        .into_iter()
        .filter_map(|comp| {
            let comp: Vec<usize> = comp.into_iter().filter(|&v| allowed[v]).collect();
            match comp.len() {
                0 => None,
                1 if !filtered[comp[0]].contains(&comp[0]) => None,
                _ => Some(comp.into_iter().collect()),
            }
        })
        .collect()
}

/// SCCs of the `allowed` subgraph with no edge leaving them (each supports a
/// closed walk whenever its states have successors, e.g. in a complete
/// deterministic graph).
pub fn bottom_sccs(adj: &[Vec<usize>], allowed: &[bool]) -> Vec<BTreeSet<usize>> {
    let filtered = restrict(adj, allowed);
    sccs(&filtered)
        .into_iter()
        .filter_map(|comp| {
            let comp: BTreeSet<usize> = comp.into_iter().filter(|&v| allowed[v]).collect();
            if comp.is_empty() {
                return None;
            }
            let closed = comp
                .iter()
                .all(|&v| !filtered[v].is_empty() && filtered[v].iter().all(|w| comp.contains(w)));
            if closed {
                Some(comp)
            } else {
                None
            }
        })
        .collect()
}

/// A loop inside `allowed` meeting every set in `require`, if one exists.
/// Since the constraints are monotone under union, full SCCs are maximal
/// witnesses and it suffices to inspect them.
pub fn constrained_loop(
    adj: &[Vec<usize>],
    allowed: &[bool],
    require: &[&[bool]],
) -> Option<BTreeSet<usize>> {
    component_loops(adj, allowed)
        .into_iter()
        .find(|comp| require.iter().all(|r| comp.iter().any(|&v| r[v])))
}

/// One acceptance pair shared by the Rabin and Streett views of a loop S:
/// the Rabin reading is "S stays in `stay` and meets `hit`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPair {
    pub stay: Vec<bool>,
    pub hit: Vec<bool>,
}

/// A loop inside `allowed` violating every pair's Rabin reading (for each
/// pair: leave `stay`, or miss `hit`) while meeting every set in `require`.
///
/// Standard Streett emptiness: on each SCC, pairs the component cannot leave
/// force their `hit` states out, and the search recurses on the remainder.
pub fn streett_loop(
    adj: &[Vec<usize>],
    allowed: &[bool],
    pairs: &[LoopPair],
    require: &[&[bool]],
) -> Option<BTreeSet<usize>> {
    let mut frontier: Vec<Vec<bool>> = vec![allowed.to_vec()];
    while let Some(region) = frontier.pop() {
        for comp in component_loops(adj, &region) {
            let trapped: Vec<&LoopPair> = pairs
                .iter()
                .filter(|p| {
                    comp.iter().all(|&v| p.stay[v]) && comp.iter().any(|&v| p.hit[v])
                })
                .collect();
            if trapped.is_empty() {
                if require.iter().all(|r| comp.iter().any(|&v| r[v])) {
                    return Some(comp);
                }
                continue;
            }
            // any valid loop inside comp must avoid the trapped pairs' hits
            let mut shrunk = vec![false; adj.len()];
            for &v in &comp {
                shrunk[v] = !trapped.iter().any(|p| p.hit[v]);
            }
            frontier.push(shrunk);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_basic() {
        // 0 -> 1 -> 2 -> 1, 2 -> 3
        let adj = vec![vec![1], vec![2], vec![1, 3], vec![]];
        let comps = sccs(&adj);
        let mut sizes: Vec<usize> = comps.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2]);
    }

    #[test]
    fn loops_of_two_cycle() {
        let adj = vec![vec![1], vec![0, 1]];
        let alive = vec![true, true];
        let mut loops = enumerate_loops(&adj, &alive, 10).unwrap();
        loops.sort();
        assert_eq!(
            loops,
            vec![BTreeSet::from([0, 1]), BTreeSet::from([1])]
        );
    }

    #[test]
    fn singleton_needs_self_loop() {
        let adj = vec![vec![1], vec![]];
        assert!(enumerate_loops(&adj, &[true, true], 10).unwrap().is_empty());
    }
}

//! Determinization of Buchi automata into deterministic Muller automata via
//! Safra trees, the reverse translation, and complementation.

use crate::automaton::{AcceptanceMode, BuchiAutomaton, MullerAcceptance, MullerAutomaton, StateId};
use crate::error::{Error, Result};
use crate::graph;
use crate::membership;
use crate::ops;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

/// Hard cap on macro-states produced by subset-like constructions.
pub const MACRO_STATE_CAP: usize = 100_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Node {
    states: BTreeSet<StateId>,
    marked: bool,
    children: Vec<usize>,
}

/// A Safra tree over a fixed name pool. Names are allocated deterministically
/// (smallest free), so structural equality is tree equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Tree {
    nodes: BTreeMap<usize, Node>,
}

const ROOT: usize = 0;

impl Tree {
    fn initial(q0: StateId) -> Tree {
        let mut nodes = BTreeMap::new();
        nodes.insert(
            ROOT,
            Node {
                states: BTreeSet::from([q0]),
                marked: false,
                children: Vec::new(),
            },
        );
        Tree { nodes }
    }

    fn fresh_name(&self, pool: usize) -> Result<usize> {
        (0..pool)
            .find(|n| !self.nodes.contains_key(n))
            .ok_or_else(|| Error::Capacity("safra name pool".into(), pool))
    }

    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![ROOT];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &c in self.nodes[&v].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(w) = stack.pop() {
            out.push(w);
            stack.extend(self.nodes[&w].children.iter().copied());
        }
        out
    }

    fn remove_subtree_of_children(&mut self, v: usize) {
        let kids = std::mem::take(&mut self.nodes.get_mut(&v).unwrap().children);
        for c in kids {
            for w in self.subtree(c) {
                self.nodes.remove(&w);
            }
        }
    }
}

/// One Safra transition step on symbol `sym` of the (complete) automaton `a`.
fn safra_step(a: &BuchiAutomaton, tree: &Tree, sym: usize, pool: usize) -> Result<Tree> {
    let mut t = tree.clone();
    // 1. Clear marks.
    for node in t.nodes.values_mut() {
        node.marked = false;
    }
    // 2. Branch: every node spawns a youngest child holding its final states.
    for v in tree.preorder() {
        let fin: BTreeSet<StateId> = t.nodes[&v]
            .states
            .iter()
            .copied()
            .filter(|&q| a.is_final(q))
            .collect();
        if !fin.is_empty() {
            let name = t.fresh_name(pool)?;
            t.nodes.insert(
                name,
                Node {
                    states: fin,
                    marked: false,
                    children: Vec::new(),
                },
            );
            t.nodes.get_mut(&v).unwrap().children.push(name);
        }
    }
    // 3. Subset step on every label.
    for node in t.nodes.values_mut() {
        let mut next = BTreeSet::new();
        for &q in &node.states {
            next.extend(a.successors(q, sym).iter().copied());
        }
        node.states = next;
    }
    // 4. Horizontal merge: a state stays only in the oldest sibling subtree
    // containing it.
    for v in t.preorder() {
        let mut claimed: BTreeSet<StateId> = BTreeSet::new();
        let kids = t.nodes[&v].children.clone();
        for c in kids {
            for w in t.subtree(c) {
                let node = t.nodes.get_mut(&w).unwrap();
                node.states = node.states.difference(&claimed).copied().collect();
            }
            claimed.extend(t.nodes[&c].states.iter().copied());
        }
    }
    // 5. Drop empty nodes (children of an empty node are empty after step 4).
    loop {
        let empty: Vec<usize> = t
            .nodes
            .iter()
            .filter(|&(&v, n)| v != ROOT && n.states.is_empty())
            .map(|(&v, _)| v)
            .collect();
        if empty.is_empty() {
            break;
        }
        for v in &empty {
            t.nodes.remove(v);
        }
        for node in t.nodes.values_mut() {
            node.children.retain(|c| !empty.contains(c));
        }
    }
    // 6. Vertical merge: saturated nodes shed their subtree and get marked.
    let mut skip: BTreeSet<usize> = BTreeSet::new();
    for v in t.preorder() {
        if skip.contains(&v) {
            continue;
        }
        let union: BTreeSet<StateId> = t.nodes[&v]
            .children
            .iter()
            .flat_map(|c| t.nodes[c].states.iter().copied())
            .collect();
        if !t.nodes[&v].children.is_empty() && union == t.nodes[&v].states {
            for w in t.subtree(v) {
                skip.insert(w);
            }
            t.remove_subtree_of_children(v);
            t.nodes.get_mut(&v).unwrap().marked = true;
        }
    }
    Ok(t)
}

/// Determinizes a Buchi automaton into a deterministic complete Muller
/// automaton whose table lists exactly the accepting reachable loops.
pub fn determinize(a: &BuchiAutomaton) -> Result<MullerAutomaton> {
    let a = ops::to_buchi(a)?.completed();
    let pool = 2 * a.num_states().max(1);
    let init = Tree::initial(a.initial());
    let mut index: HashMap<Tree, usize> = HashMap::from([(init.clone(), 0)]);
    let mut trees: Vec<Tree> = vec![init];
    let mut delta: Vec<Vec<StateId>> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(a.alphabet().len());
        for sym in 0..a.alphabet().len() {
            let next = safra_step(&a, &trees[i].clone(), sym, pool)?;
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = trees.len();
                    if j >= MACRO_STATE_CAP {
                        return Err(Error::Capacity("safra macro-states".into(), MACRO_STATE_CAP));
                    }
                    index.insert(next.clone(), j);
                    trees.push(next);
                    queue.push_back(j);
                    j
                }
            };
            row.push(j);
        }
        delta.push(row);
    }
    // Rabin condition over names: a loop accepts iff some name is present in
    // every tree of the loop and marked in at least one.
    let n = trees.len();
    let mut pairs: Vec<graph::LoopPair> = Vec::new();
    for e in 0..pool {
        let stay: Vec<bool> = (0..n).map(|v| trees[v].nodes.contains_key(&e)).collect();
        let hit: Vec<bool> = (0..n)
            .map(|v| trees[v].nodes.get(&e).is_some_and(|node| node.marked))
            .collect();
        if !hit.iter().any(|&b| b) {
            continue;
        }
        let p = graph::LoopPair { stay, hit };
        if !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    // pair i is subsumed by pair j when both masks are: any loop matching i
    // matches j, so i carries no information under either reading
    let implied = |i: usize, pairs: &[graph::LoopPair]| {
        pairs.iter().enumerate().any(|(j, pj)| {
            j != i
                && pairs[i].stay.iter().zip(&pj.stay).all(|(&a, &b)| !a || b)
                && pairs[i].hit.iter().zip(&pj.hit).all(|(&a, &b)| !a || b)
        })
    };
    let mut i = 0;
    while i < pairs.len() {
        if implied(i, &pairs) {
            pairs.remove(i);
        } else {
            i += 1;
        }
    }
    MullerAutomaton::with_acceptance(
        a.alphabet().clone(),
        delta,
        0,
        MullerAcceptance::Rabin(pairs),
    )
}

/// All reachable loops of a deterministic Muller automaton's graph.
pub fn reachable_loops(m: &MullerAutomaton) -> Result<Vec<BTreeSet<StateId>>> {
    let adj = m.adjacency();
    let alive = graph::reachable(&adj, m.initial());
    graph::enumerate_loops(&adj, &alive, graph::LOOP_ENUM_SCC_MAX)
}

/// Complement of a deterministic Muller automaton: same machine, designation
/// flipped. Pair-based acceptance flips between its Rabin and Streett
/// readings; an explicit table is flipped within the reachable loops.
pub fn muller_complement(m: &MullerAutomaton) -> Result<MullerAutomaton> {
    let acceptance = match m.acceptance() {
        MullerAcceptance::Rabin(p) => MullerAcceptance::Streett(p.clone()),
        MullerAcceptance::Streett(p) => MullerAcceptance::Rabin(p.clone()),
        MullerAcceptance::Table(_) => {
            let loops = reachable_loops(m)?;
            let table: Vec<BTreeSet<StateId>> =
                loops.into_iter().filter(|s| !m.designates(s)).collect();
            return Ok(m.with_table(table));
        }
    };
    MullerAutomaton::with_acceptance(m.alphabet().clone(), m.delta().clone(), m.initial(), acceptance)
}

/// Translates a deterministic Muller automaton into an equivalent
/// nondeterministic Buchi automaton, by a gadget chosen per acceptance
/// representation: tables tick off a committed loop member by member, Rabin
/// pairs commit to one pair's stay region, Streett pairs guess the set of
/// pairs whose hit states are avoided forever.
pub fn muller_to_buchi(m: &MullerAutomaton) -> Result<BuchiAutomaton> {
    match m.acceptance() {
        MullerAcceptance::Table(table) => table_to_buchi(m, &table.clone()),
        MullerAcceptance::Rabin(pairs) => rabin_to_buchi(m, &pairs.clone()),
        MullerAcceptance::Streett(pairs) => streett_to_buchi(m, &pairs.clone()),
    }
}

fn table_to_buchi(m: &MullerAutomaton, table: &[BTreeSet<StateId>]) -> Result<BuchiAutomaton> {
    let k = m.num_states();
    let nsym = m.alphabet().len();
    // Gadget layout: per table entry F = [f_0..f_{m-1}], states
    // (position-in-F, awaited index, wrapped flag).
    let mut offsets = Vec::with_capacity(table.len());
    let mut total = k;
    let sorted: Vec<Vec<StateId>> = table.iter().map(|f| f.iter().copied().collect()).collect();
    for f in &sorted {
        offsets.push(total);
        total += f.len() * f.len() * 2;
    }
    let gadget = |fi: usize, qpos: usize, i: usize, w: usize| {
        let mlen = sorted[fi].len();
        offsets[fi] + (qpos * mlen + i) * 2 + w
    };
    let mut out = BuchiAutomaton::new(m.alphabet().clone(), total, m.initial(), AcceptanceMode::Buchi)?;
    let advance = |f: &[StateId], q2: StateId, i: usize| -> (usize, usize) {
        if f[i] == q2 {
            if i + 1 == f.len() {
                (0, 1)
            } else {
                (i + 1, 0)
            }
        } else {
            (i, 0)
        }
    };
    for q in 0..k {
        for sym in 0..nsym {
            let q2 = m.successor(q, sym);
            out.add_transition_idx(q, sym, q2)?;
            // Commit to some F containing the successor.
            for (fi, f) in sorted.iter().enumerate() {
                if let Ok(qpos2) = f.binary_search(&q2) {
                    let (i2, w2) = advance(f, q2, 0);
                    out.add_transition_idx(q, sym, gadget(fi, qpos2, i2, w2))?;
                }
            }
        }
    }
    for (fi, f) in sorted.iter().enumerate() {
        for (qpos, &q) in f.iter().enumerate() {
            for i in 0..f.len() {
                for w in 0..2 {
                    if w == 1 {
                        out.set_final(gadget(fi, qpos, i, w), true);
                    }
                    for sym in 0..nsym {
                        let q2 = m.successor(q, sym);
                        if let Ok(qpos2) = f.binary_search(&q2) {
                            let (i2, w2) = advance(f, q2, i);
                            out.add_transition_idx(
                                gadget(fi, qpos, i, w),
                                sym,
                                gadget(fi, qpos2, i2, w2),
                            )?;
                        }
                    }
                }
            }
        }
    }
    ops::trim(&out)
}

/// Roam copy plus, per pair, a copy restricted to the pair's stay region with
/// final states at its hit states; the run commits by jumping into a copy.
fn rabin_to_buchi(m: &MullerAutomaton, pairs: &[graph::LoopPair]) -> Result<BuchiAutomaton> {
    let k = m.num_states();
    let nsym = m.alphabet().len();
    let total = k + pairs.len() * k;
    if total > MACRO_STATE_CAP {
        return Err(Error::Capacity("rabin translation states".into(), MACRO_STATE_CAP));
    }
    let copy = |e: usize, q: StateId| k + e * k + q;
    let mut out =
        BuchiAutomaton::new(m.alphabet().clone(), total, m.initial(), AcceptanceMode::Buchi)?;
    for q in 0..k {
        for sym in 0..nsym {
            let q2 = m.successor(q, sym);
            out.add_transition_idx(q, sym, q2)?;
            for (e, p) in pairs.iter().enumerate() {
                if p.stay[q2] {
                    out.add_transition_idx(q, sym, copy(e, q2))?;
                    if p.stay[q] {
                        out.add_transition_idx(copy(e, q), sym, copy(e, q2))?;
                    }
                }
            }
        }
    }
    for (e, p) in pairs.iter().enumerate() {
        for q in 0..k {
            if p.stay[q] && p.hit[q] {
                out.set_final(copy(e, q), true);
            }
        }
    }
    ops::trim(&out)
}

/// Roam copy plus, per guessed pair set T, a copy avoiding the hit states of
/// T and cycling a counter that demands each remaining pair's stay region be
/// left again and again; the wrap state is the accepting event. Exponential
/// in the number of pairs, so capacity-capped.
fn streett_to_buchi(m: &MullerAutomaton, pairs: &[graph::LoopPair]) -> Result<BuchiAutomaton> {
    let k = m.num_states();
    let nsym = m.alphabet().len();
    let p = pairs.len();
    if p >= usize::BITS as usize - 1 {
        return Err(Error::Capacity("streett translation pairs".into(), usize::BITS as usize));
    }
    let mut offsets = Vec::with_capacity(1 << p);
    let mut total = k;
    let outs: Vec<Vec<usize>> = (0..1usize << p)
        .map(|mask| (0..p).filter(|e| mask & (1 << e) == 0).collect())
        .collect();
    for out in &outs {
        offsets.push(total);
        total += k * (out.len() + 2);
        if total > MACRO_STATE_CAP {
            return Err(Error::Capacity("streett translation states".into(), MACRO_STATE_CAP));
        }
    }
    // Copy `mask` state (q, j): j counts satisfied pairs among outs[mask];
    // j = outs.len() + 1 is the wrap (final) rank, reset to 0 on the next step.
    let enc = |mask: usize, q: StateId, j: usize| offsets[mask] + q * (outs[mask].len() + 2) + j;
    let mut outb =
        BuchiAutomaton::new(m.alphabet().clone(), total, m.initial(), AcceptanceMode::Buchi)?;
    for mask in 0..1usize << p {
        let wrap = outs[mask].len() + 1;
        for q in 0..k {
            outb.set_final(enc(mask, q, wrap), true);
        }
    }
    let avoid_ok = |mask: usize, q: StateId| (0..p).all(|e| mask & (1 << e) == 0 || !pairs[e].hit[q]);
    let step_rank = |mask: usize, q2: StateId, j: usize| -> usize {
        let os = &outs[mask];
        let jj = if j == os.len() + 1 { 0 } else { j };
        if jj == os.len() {
            // all pairs ticked: move to the wrap rank
            os.len() + 1
        } else if !pairs[os[jj]].stay[q2] {
            jj + 1
        } else {
            jj
        }
    };
    for q in 0..k {
        for sym in 0..nsym {
            let q2 = m.successor(q, sym);
            outb.add_transition_idx(q, sym, q2)?;
            for mask in 0..1usize << p {
                if avoid_ok(mask, q2) {
                    outb.add_transition_idx(q, sym, enc(mask, q2, step_rank(mask, q2, 0)))?;
                }
            }
        }
    }
    for mask in 0..1usize << p {
        for q in 0..k {
            if !avoid_ok(mask, q) {
                continue;
            }
            for j in 0..outs[mask].len() + 2 {
                for sym in 0..nsym {
                    let q2 = m.successor(q, sym);
                    if avoid_ok(mask, q2) {
                        outb.add_transition_idx(
                            enc(mask, q, j),
                            sym,
                            enc(mask, q2, step_rank(mask, q2, j)),
                        )?;
                    }
                }
            }
        }
    }
    ops::trim(&outb)
}

/// Complement of an omega-regular language, with deterministic fast paths.
pub fn complement(a: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    match a.mode() {
        AcceptanceMode::CoBuchi => {
            // Deterministic complete by validation: flip to Buchi.
            a.validate()?;
            let mut out = a.clone();
            out.set_mode(AcceptanceMode::Buchi);
            Ok(out)
        }
        AcceptanceMode::Buchi if a.is_deterministic() && a.is_complete() => {
            let mut out = a.clone();
            out.set_mode(AcceptanceMode::CoBuchi);
            Ok(out)
        }
        AcceptanceMode::Buchi => {
            let m = determinize(a)?;
            muller_to_buchi(&muller_complement(&m)?)
        }
    }
}

/// Exact language equality, by emptiness of both difference products.
pub fn equivalent(a1: &BuchiAutomaton, a2: &BuchiAutomaton) -> Result<bool> {
    if a1.alphabet() != a2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(subset(a1, a2)? && subset(a2, a1)?)
}

/// Language inclusion: emptiness of the left side against the complemented
/// right side, taken as a Buchi machine when the right side is deterministic
/// and as a determinized Muller machine otherwise.
pub fn subset(a1: &BuchiAutomaton, a2: &BuchiAutomaton) -> Result<bool> {
    if a1.alphabet() != a2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if a2.is_deterministic() && a2.is_complete() {
        let d = ops::intersection(&ops::to_buchi(a1)?, &complement(a2)?)?;
        return Ok(membership::is_empty_buchi(&d));
    }
    let mc = muller_complement(&determinize(a2)?)?;
    Ok(membership::intersection_witness_muller(a1, &mc)?.is_none())
}

/// Exact language equality between a deterministic Buchi automaton and a
/// deterministic Muller automaton, by cross-checking loops of the product.
pub fn dba_equals_muller(dba: &BuchiAutomaton, m: &MullerAutomaton) -> Result<bool> {
    if dba.alphabet() != m.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if !(dba.is_deterministic() && dba.is_complete()) {
        return Err(Error::Precondition("dba_equals_muller needs a complete DBA".into()));
    }
    // Product is deterministic: a loop of the product projects to loops on
    // both sides; languages agree iff every reachable product loop agrees.
    let k = m.num_states();
    let idx = |s: StateId, t: StateId| s * k + t;
    let mut adj = vec![Vec::new(); dba.num_states() * k];
    for s in 0..dba.num_states() {
        for t in 0..k {
            for sym in 0..m.alphabet().len() {
                let s2 = dba.det_successor(s, sym).unwrap();
                let t2 = m.successor(t, sym);
                adj[idx(s, t)].push(idx(s2, t2));
            }
        }
    }
    for row in adj.iter_mut() {
        row.sort_unstable();
        row.dedup();
    }
    let n = adj.len();
    let alive = graph::reachable(&adj, idx(dba.initial(), m.initial()));
    let finals: Vec<bool> = (0..n).map(|v| dba.is_final(v / k)).collect();
    // The projected infinity set of a run looping exactly over a product loop
    // s is its Muller projection, a loop of m since the product is
    // synchronised; the languages agree iff no product loop disagrees.
    let lift = |mask: &[bool]| -> Vec<bool> { (0..n).map(|v| mask[v % k]).collect() };
    match m.acceptance() {
        MullerAcceptance::Table(_) => {
            let loops = graph::enumerate_loops(&adj, &alive, graph::LOOP_ENUM_SCC_MAX)?;
            for s in loops {
                let in_dba = s.iter().any(|&v| finals[v]);
                let proj: BTreeSet<StateId> = s.iter().map(|&v| v % k).collect();
                if in_dba != m.designates(&proj) {
                    return Ok(false);
                }
            }
        }
        MullerAcceptance::Rabin(pairs) => {
            let lifted: Vec<graph::LoopPair> = pairs
                .iter()
                .map(|p| graph::LoopPair { stay: lift(&p.stay), hit: lift(&p.hit) })
                .collect();
            // final-visiting loop rejected by m
            if graph::streett_loop(&adj, &alive, &lifted, &[&finals]).is_some() {
                return Ok(false);
            }
            // final-avoiding loop accepted by m
            let quiet: Vec<bool> = (0..n).map(|v| alive[v] && !finals[v]).collect();
            for p in &lifted {
                let allowed: Vec<bool> = (0..n).map(|v| quiet[v] && p.stay[v]).collect();
                if graph::constrained_loop(&adj, &allowed, &[&p.hit]).is_some() {
                    return Ok(false);
                }
            }
        }
        MullerAcceptance::Streett(pairs) => {
            let lifted: Vec<graph::LoopPair> = pairs
                .iter()
                .map(|p| graph::LoopPair { stay: lift(&p.stay), hit: lift(&p.hit) })
                .collect();
            for p in &lifted {
                let allowed: Vec<bool> = (0..n).map(|v| alive[v] && p.stay[v]).collect();
                if graph::constrained_loop(&adj, &allowed, &[&p.hit, &finals]).is_some() {
                    return Ok(false);
                }
            }
            let quiet: Vec<bool> = (0..n).map(|v| alive[v] && !finals[v]).collect();
            if graph::streett_loop(&adj, &quiet, &lifted, &[]).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Moore-style partition refinement for complete deterministic machines with
/// a boolean state label; sound for acceptance defined on the label sequence
/// (Buchi, co-Buchi, safety), not for Muller tables.
pub fn minimize_det(a: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    if !(a.is_deterministic() && a.is_complete()) {
        return Err(Error::Precondition("minimize_det needs a complete deterministic machine".into()));
    }
    let a = ops::trim(a)?;
    let n = a.num_states();
    let nsym = a.alphabet().len();
    let mut class: Vec<usize> = (0..n).map(|s| a.is_final(s) as usize).collect();
    loop {
        let mut sig: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for s in 0..n {
            let key = (
                class[s],
                (0..nsym)
                    .map(|sym| class[a.det_successor(s, sym).unwrap()])
                    .collect::<Vec<_>>(),
            );
            let id = sig.len();
            next[s] = *sig.entry(key).or_insert(id);
        }
        if next == class {
            break;
        }
        class = next;
    }
    let num = class.iter().max().map_or(0, |&m| m + 1);
    let mut out = BuchiAutomaton::new(a.alphabet().clone(), num, class[a.initial()], a.mode())?;
    let mut seen = vec![false; num];
    for s in 0..n {
        if seen[class[s]] {
            continue;
        }
        seen[class[s]] = true;
        out.set_final(class[s], a.is_final(s));
        for sym in 0..nsym {
            out.add_transition_idx(class[s], sym, class[a.det_successor(s, sym).unwrap()])?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::membership::{member_buchi, member_muller};
    use crate::word::UPWord;

    fn up(lit: &str) -> UPWord {
        UPWord::parse(lit).unwrap()
    }

    fn sample_words() -> Vec<UPWord> {
        ["(a)", "(b)", "(ab)", "(ba)", "a(b)", "b(a)", "ab(a)", "ba(b)", "(aab)", "(abb)", "aa(bab)", "bb(aba)"]
            .iter()
            .map(|l| up(l))
            .collect()
    }

    fn inf_a() -> BuchiAutomaton {
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 1).unwrap();
        a.add_transition(1, 'a', 0).unwrap();
        a.add_transition(1, 'b', 1).unwrap();
        a.set_final(0, true);
        a
    }

    /// Nondeterministic: finitely many b (guess the last b).
    fn fin_b() -> BuchiAutomaton {
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 0).unwrap();
        a.add_transition(0, 'a', 1).unwrap();
        a.add_transition(1, 'a', 1).unwrap();
        a.set_final(1, true);
        a
    }

    #[test]
    fn determinize_preserves_language() {
        for a in [inf_a(), fin_b()] {
            let m = determinize(&a).unwrap();
            for w in sample_words() {
                assert_eq!(
                    member_buchi(&a, &w).unwrap(),
                    member_muller(&m, &w).unwrap(),
                    "word {w}"
                );
            }
        }
    }

    #[test]
    fn complement_agrees_pointwise() {
        for a in [inf_a(), fin_b()] {
            let c = complement(&a).unwrap();
            for w in sample_words() {
                assert_eq!(
                    member_buchi(&a, &w).unwrap(),
                    !member_buchi(&c, &w).unwrap(),
                    "word {w}"
                );
            }
        }
    }

    #[test]
    fn muller_roundtrip() {
        let m = determinize(&fin_b()).unwrap();
        let b = muller_to_buchi(&m).unwrap();
        for w in sample_words() {
            assert_eq!(
                member_muller(&m, &w).unwrap(),
                member_buchi(&b, &w).unwrap(),
                "word {w}"
            );
        }
    }

    #[test]
    fn muller_product_witness() {
        let m = determinize(&fin_b()).unwrap();
        let mc = muller_complement(&m).unwrap(); // infinitely many b
        let w = membership::intersection_witness_muller(&inf_a(), &mc)
            .unwrap()
            .expect("inf-a and inf-b intersect");
        assert!(member_buchi(&inf_a(), &w).unwrap());
        assert!(member_muller(&mc, &w).unwrap());
        assert!(membership::intersection_witness_muller(&fin_b(), &mc).unwrap().is_none());
    }

    #[test]
    fn dba_muller_equality() {
        let m = determinize(&inf_a()).unwrap();
        let mut dba = inf_a(); // already deterministic and complete
        assert!(dba_equals_muller(&dba, &m).unwrap());
        dba.set_final(1, true); // now universal: not equal
        assert!(!dba_equals_muller(&dba, &m).unwrap());
    }

    #[test]
    fn minimize_det_shrinks_and_preserves() {
        // Duplicate-state version of inf_a.
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 4, 0, AcceptanceMode::Buchi).unwrap();
        for (s, t) in [(0, 2), (2, 0)] {
            a.add_transition(s, 'a', t).unwrap();
            a.add_transition(s, 'b', 1).unwrap();
            a.set_final(s, true);
            let _ = t;
        }
        a.add_transition(1, 'a', 2).unwrap();
        a.add_transition(1, 'b', 3).unwrap();
        a.add_transition(3, 'a', 0).unwrap();
        a.add_transition(3, 'b', 1).unwrap();
        let min = minimize_det(&a).unwrap();
        assert!(min.num_states() <= 2);
        for w in sample_words() {
            assert_eq!(member_buchi(&a, &w).unwrap(), member_buchi(&min, &w).unwrap());
        }
    }
}

//! Exact minimal-length natural deduction by breadth-first search.
//!
//! A search state records, per open subproof, its assumption, its goal, why
//! it was opened, and the set of formulas written at that level. Each move
//! costs the number of lines it writes, so the search is uniform-cost over
//! proof length. Intermediate formulas range over a finite universe:
//! subformulas of the inputs, their negations and double negations, up to a
//! depth cap. Moves are goal-directed (see [`Search`]), so lengths are
//! minimal among proofs of that shape.

use std::collections::{BTreeSet, HashMap};
use std::iter;
use std::rc::Rc;
use std::time::Instant;

use super::proof::{check_proof, Claim, Line, Proof, Reference, Rule};
use super::{Certificate, DeductionMode, Diagnostics, Exhaustion, ProofLength, ProverBudget, ProverOutcome};
use crate::formula::{entails, Connective, Formula};

pub(crate) type Id = u16;
pub(crate) const NONE: Id = Id::MAX;
pub(crate) const BOTTOM: Id = 0;

#[derive(Clone, Copy, Debug)]
struct Recipe {
    rule: Rule,
    cites: [Id; 2],
    /// Introduction rules only fire toward a wanted formula.
    intro: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Bottom,
    Var,
    Not(Id),
    Bin(Connective, Id, Id),
}

pub(crate) struct Universe {
    claims: Vec<Claim>,
    ids: HashMap<Formula, Id>,
    shapes: Vec<Shape>,
    recipes: Vec<Vec<Recipe>>,
    neg: Vec<Id>,
    classical: bool,
}

impl Universe {
    /// Formulas admitted when every intermediate formula has depth at most `cap`.
    fn members(inputs: &[&Formula], cap: u32) -> Vec<Formula> {
        let mut sub = BTreeSet::new();
        for phi in inputs {
            phi.for_each_subformula(&mut |s| {
                sub.insert(s.clone());
            });
        }
        let mut all = BTreeSet::new();
        for s in sub {
            let n1 = Formula::not(s.clone());
            let n2 = Formula::not(n1.clone());
            for x in [s, n1, n2] {
                if x.depth() <= cap {
                    all.insert(x);
                }
            }
        }
        let mut out: Vec<Formula> = all.into_iter().collect();
        out.sort_by_cached_key(|x| (x.depth(), x.size(), x.clone()));
        out
    }

    pub(crate) fn new(inputs: &[&Formula], cap: u32, mode: DeductionMode) -> Option<Universe> {
        let members = Universe::members(inputs, cap);
        if members.len() + 1 >= NONE as usize {
            return None;
        }
        let n = members.len() + 1;
        let classical = mode == DeductionMode::Classical;
        let mut u = Universe {
            claims: iter::once(Claim::Bottom).chain(members.iter().cloned().map(Claim::Formula)).collect(),
            ids: HashMap::new(),
            shapes: vec![Shape::Bottom; n],
            recipes: vec![Vec::new(); n],
            neg: vec![NONE; n],
            classical,
        };
        for (k, phi) in members.iter().enumerate() {
            u.ids.insert(phi.clone(), (k + 1) as Id);
        }
        let elim = |rule, a: Id, b: Id| Recipe {
            rule,
            cites: [a, b],
            intro: false,
        };
        let intro = |rule, a: Id, b: Id| Recipe {
            rule,
            cites: [a, b],
            intro: true,
        };
        for (k, phi) in members.iter().enumerate() {
            let i = (k + 1) as Id;
            match phi {
                Formula::Var(_) => u.shapes[i as usize] = Shape::Var,
                Formula::Not(x) => {
                    let xi = u.ids[&**x];
                    u.shapes[i as usize] = Shape::Not(xi);
                    u.neg[xi as usize] = i;
                    if let Formula::Not(y) = &**x {
                        if classical {
                            let yi = u.ids[&**y];
                            u.recipes[yi as usize].push(elim(Rule::DoubleNegElim, i, NONE));
                        }
                    }
                }
                Formula::Binary(op, l, r) => {
                    let (li, ri) = (u.ids[&**l], u.ids[&**r]);
                    u.shapes[i as usize] = Shape::Bin(*op, li, ri);
                    match op {
                        Connective::And => {
                            u.recipes[i as usize].push(intro(Rule::AndIntro, li, ri));
                            u.recipes[li as usize].push(elim(Rule::AndElimLeft, i, NONE));
                            u.recipes[ri as usize].push(elim(Rule::AndElimRight, i, NONE));
                        }
                        Connective::Or => {
                            u.recipes[i as usize].push(intro(Rule::OrIntroLeft, li, NONE));
                            u.recipes[i as usize].push(intro(Rule::OrIntroRight, ri, NONE));
                        }
                        Connective::Implies => u.recipes[ri as usize].push(elim(Rule::ImpliesElim, li, i)),
                        Connective::Iff => {
                            u.recipes[ri as usize].push(elim(Rule::IffElimLeft, i, li));
                            u.recipes[li as usize].push(elim(Rule::IffElimRight, i, ri));
                        }
                    }
                }
            }
        }
        for x in 1..n {
            let nx = u.neg[x];
            if nx != NONE {
                u.recipes[BOTTOM as usize].push(elim(Rule::NotElim, x as Id, nx));
            }
        }
        Some(u)
    }

    pub(crate) fn len(&self) -> usize {
        self.claims.len()
    }

    pub(crate) fn id(&self, phi: &Formula) -> Option<Id> {
        self.ids.get(phi).copied()
    }

    pub(crate) fn claim(&self, id: Id) -> &Claim {
        &self.claims[id as usize]
    }

    /// Whether eliminations starting from `z` reach a formula accepted by
    /// `target`. On success the minor premises needed along the way go to
    /// `minors` and the formulas passed through go to `path`.
    fn reaches(&self, z: Id, target: &dyn Fn(Id) -> bool, minors: &mut Vec<Id>, path: &mut Vec<Id>) -> bool {
        let (m0, p0) = (minors.len(), path.len());
        let via = |next: Id, minor: Id, minors: &mut Vec<Id>, path: &mut Vec<Id>| {
            let ok = self.reaches(next, target, minors, path);
            if ok && minor != NONE {
                minors.push(minor);
            }
            ok
        };
        let deeper = match self.shapes[z as usize] {
            Shape::Bin(Connective::Implies, a, b) => via(b, a, minors, path),
            Shape::Bin(Connective::And, a, b) => {
                let left = via(a, NONE, minors, path);
                via(b, NONE, minors, path) || left
            }
            Shape::Bin(Connective::Iff, a, b) => {
                let fwd = via(b, a, minors, path);
                via(a, b, minors, path) || fwd
            }
            Shape::Not(x) => {
                let bottom = target(BOTTOM) && {
                    minors.push(x);
                    path.push(BOTTOM);
                    true
                };
                let dne = self.classical
                    && match self.shapes[x as usize] {
                        Shape::Not(y) => via(y, NONE, minors, path),
                        _ => false,
                    };
                bottom || dne
            }
            _ => false,
        };
        let ok = deeper || target(z);
        if ok {
            path.push(z);
        } else {
            minors.truncate(m0);
            path.truncate(p0);
        }
        ok
    }
}

/// Why a subproof was opened, which fixes how it is closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Purpose {
    Root,
    Implies(Id),
    Not(Id),
    OrFirst { disj: Id, other: Id },
    OrSecond { disj: Id, first: Id },
    IffFirst(Id),
    IffSecond(Id),
}

impl Purpose {
    fn encode(self) -> [Id; 3] {
        match self {
            Purpose::Root => [0, NONE, NONE],
            Purpose::Implies(i) => [1, i, NONE],
            Purpose::Not(i) => [2, i, NONE],
            Purpose::OrFirst { disj, other } => [3, disj, other],
            Purpose::OrSecond { disj, first } => [4, disj, first],
            Purpose::IffFirst(i) => [5, i, NONE],
            Purpose::IffSecond(i) => [6, i, NONE],
        }
    }

    fn decode([tag, a, b]: [Id; 3]) -> Purpose {
        match tag {
            0 => Purpose::Root,
            1 => Purpose::Implies(a),
            2 => Purpose::Not(a),
            3 => Purpose::OrFirst { disj: a, other: b },
            4 => Purpose::OrSecond { disj: a, first: b },
            5 => Purpose::IffFirst(a),
            _ => Purpose::IffSecond(a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Frame {
    /// `NONE` for the outermost level.
    assumption: Id,
    /// The subproof closes as soon as this becomes visible.
    goal: Id,
    purpose: Purpose,
    lines: Vec<Id>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct State {
    frames: Vec<Frame>,
}

impl State {
    pub(crate) fn initial(goal: Id) -> State {
        State {
            frames: vec![Frame {
                assumption: NONE,
                goal,
                purpose: Purpose::Root,
                lines: Vec::new(),
            }],
        }
    }

    pub(crate) fn encode(&self) -> Vec<Id> {
        let mut out = Vec::new();
        for f in &self.frames {
            out.extend([f.assumption, f.goal]);
            out.extend(f.purpose.encode());
            out.push(f.lines.len() as Id);
            out.extend(&f.lines);
        }
        out
    }

    pub(crate) fn decode(key: &[Id]) -> State {
        let mut it = key.iter().copied();
        let mut frames = Vec::new();
        while let Some(assumption) = it.next() {
            let goal = it.next().unwrap();
            let purpose = Purpose::decode([it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]);
            let n = it.next().unwrap() as usize;
            let lines = it.by_ref().take(n).collect();
            frames.push(Frame {
                assumption,
                goal,
                purpose,
                lines,
            });
        }
        State { frames }
    }

    fn top(&self) -> &Frame {
        self.frames.last().unwrap()
    }

    fn write(&mut self, id: Id) {
        insert_sorted(&mut self.frames.last_mut().unwrap().lines, id);
    }

    fn open(&mut self, assumption: Id, goal: Id, purpose: Purpose) {
        self.frames.push(Frame {
            assumption,
            goal,
            purpose,
            lines: vec![assumption],
        });
    }

    fn visible(&self, id: Id) -> bool {
        self.frames.iter().any(|f| f.lines.binary_search(&id).is_ok())
    }
}

fn insert_sorted<T: Ord>(v: &mut Vec<T>, x: T) {
    if let Err(p) = v.binary_search(&x) {
        v.insert(p, x);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Close {
    Implies(Id),
    Not(Id),
    /// `other` is the converse subproof, or `None` when the closing one serves both ways.
    Iff { result: Id, other: Option<(Id, Id)> },
    Or { result: Id, disj: Id, other: Option<(Id, Id)> },
    /// Closes without writing a line, leaving the subproof citable.
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Step {
    Premise(Id),
    Derive { rule: Rule, conclusion: Id, cites: [Id; 2] },
    Assume(Id),
    Reiterate(Id),
    Explode(Id),
    Close(Close),
}

impl Step {
    pub(crate) fn cost(self) -> u32 {
        match self {
            Step::Close(Close::Plain) => 0,
            _ => 1,
        }
    }
}

/// One search move: the steps it writes and the state it leads to.
pub(crate) struct Move {
    pub steps: Vec<Step>,
    pub state: State,
}

impl Move {
    pub(crate) fn cost(&self) -> u32 {
        self.steps.iter().map(|s| s.cost()).sum()
    }
}

/// Goal-directed move generator.
///
/// Introductions and new subproofs only target formulas the innermost
/// subproof wants: its goal, ⊥, components of wanted conjunctions and
/// disjunctions, and minor premises of elimination chains from visible
/// formulas that end in a wanted formula or a disjunction open for case
/// analysis. Eliminations only derive formulas on such chains. A subproof closes as
/// soon as its goal is visible, and the second half of a case split or a
/// biconditional opens right after the first.
pub(crate) struct Search<'u> {
    u: &'u Universe,
    premises: Vec<Id>,
    goal: Id,
}

impl<'u> Search<'u> {
    pub(crate) fn new(u: &'u Universe, premises: &[Formula], goal: &Formula) -> Search<'u> {
        let mut ids: Vec<Id> = premises.iter().filter_map(|p| u.id(p)).collect();
        ids.sort_unstable();
        ids.dedup();
        Search {
            u,
            premises: ids,
            goal: u.id(goal).expect("goal is in the universe"),
        }
    }

    pub(crate) fn start(&self) -> State {
        State::initial(self.goal)
    }

    pub(crate) fn is_goal(&self, s: &State) -> bool {
        s.frames[0].lines.binary_search(&self.goal).is_ok()
    }

    /// Relaxed cost of writing `target`: subproof scoping is ignored and
    /// a rule's premises are assumed to be derivable in parallel.
    fn relaxed_cost(&self, s: &State, target: Id) -> u32 {
        const FAR: u32 = u32::MAX / 4;
        let u = self.u;
        let n = u.len();
        let mut cost = vec![FAR; n];
        for f in &s.frames {
            for &x in &f.lines {
                cost[x as usize] = 0;
            }
        }
        if cost[target as usize] == 0 {
            return 0;
        }
        for &p in &self.premises {
            cost[p as usize] = cost[p as usize].min(1);
        }
        let opened = |x: usize| -> u32 {
            match u.shapes[x] {
                Shape::Bin(Connective::Implies, a, b) => 2 + (a != b) as u32,
                Shape::Bin(Connective::Iff, a, b) => 3 + 2 * (a != b) as u32,
                Shape::Not(_) => 3,
                _ => FAR,
            }
        };
        let raa = if u.classical { 4 } else { FAR };
        loop {
            let mut changed = false;
            let or_split = (0..n)
                .filter(|&d| matches!(u.shapes[d], Shape::Bin(Connective::Or, ..)))
                .map(|d| cost[d] + 3)
                .min()
                .unwrap_or(FAR);
            for x in 0..n {
                if cost[x] == 0 {
                    continue;
                }
                let mut c = cost[x].min(opened(x)).min(or_split).min(raa);
                if x != BOTTOM as usize {
                    c = c.min(1 + cost[BOTTOM as usize]);
                }
                for rc in &u.recipes[x] {
                    let need = rc.cites.iter().filter(|&&y| y != NONE).map(|&y| cost[y as usize]).max().unwrap_or(0);
                    c = c.min(1 + need);
                }
                if c < cost[x] {
                    cost[x] = c;
                    changed = true;
                }
            }
            if !changed {
                return cost[target as usize];
            }
        }
    }

    /// Lines every completion of `s` still has to write: the goal line of
    /// the innermost subproof and the closing lines of each open one.
    pub(crate) fn lower_bound(&self, s: &State) -> u32 {
        if self.is_goal(s) {
            return 0;
        }
        let closing: u32 = s.frames[1..]
            .iter()
            .map(|f| match f.purpose {
                Purpose::OrFirst { other, .. } => 2 + (other != f.goal) as u32,
                Purpose::IffFirst(_) => 2 + (f.assumption != f.goal) as u32,
                _ => 1,
            })
            .sum();
        self.relaxed_cost(s, s.top().goal).max(1) + closing
    }

    /// Formulas the innermost subproof wants, and formulas worth deriving
    /// by elimination.
    fn relevance(&self, s: &State, vis: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let u = self.u;
        let visible: Vec<Id> = (0..u.len() as Id).filter(|&x| vis[x as usize]).collect();
        let mut wanted = vec![false; u.len()];
        let mut relevant = vec![false; u.len()];
        let mut work = vec![s.top().goal, BOTTOM];
        let (mut minors, mut path) = (Vec::new(), Vec::new());
        loop {
            while let Some(x) = work.pop() {
                if std::mem::replace(&mut wanted[x as usize], true) {
                    continue;
                }
                if let Shape::Bin(Connective::And | Connective::Or, a, b) = u.shapes[x as usize] {
                    work.extend([a, b]);
                }
            }
            let target = |c: Id| {
                !vis[c as usize]
                    && (wanted[c as usize]
                        || matches!(u.shapes[c as usize],
                            Shape::Bin(Connective::Or, a, b) if !vis[a as usize] && !vis[b as usize]))
            };
            for &z in &visible {
                minors.clear();
                path.clear();
                if u.reaches(z, &target, &mut minors, &mut path) {
                    work.extend(minors.iter().copied().filter(|&m| !wanted[m as usize]));
                    for &c in &path {
                        relevant[c as usize] = true;
                    }
                }
            }
            if work.is_empty() {
                return (wanted, relevant);
            }
        }
    }

    /// Closes every subproof whose goal has become visible, writing the
    /// reiteration or ⊥E line it needs and opening second halves.
    fn settle(&self, s: &mut State, mut last: Id, steps: &mut Vec<Step>) {
        loop {
            let goal = s.top().goal;
            let have_goal = s.visible(goal);
            if s.frames.len() == 1 {
                if !have_goal && s.visible(BOTTOM) {
                    s.write(goal);
                    steps.push(Step::Explode(goal));
                }
                return;
            }
            if have_goal {
                if last != goal {
                    steps.push(Step::Reiterate(goal));
                }
            } else if s.visible(BOTTOM) {
                s.write(goal);
                steps.push(Step::Explode(goal));
            } else {
                return;
            }
            let f = s.frames.pop().unwrap();
            match f.purpose {
                Purpose::Root => unreachable!("the outermost level never closes"),
                Purpose::Implies(r) => {
                    steps.push(Step::Close(Close::Implies(r)));
                    s.write(r);
                    last = r;
                }
                Purpose::Not(r) => {
                    steps.push(Step::Close(Close::Not(r)));
                    s.write(r);
                    last = r;
                }
                Purpose::OrFirst { disj, other } => {
                    steps.push(Step::Close(Close::Plain));
                    s.open(other, goal, Purpose::OrSecond { disj, first: f.assumption });
                    steps.push(Step::Assume(other));
                    last = other;
                }
                Purpose::OrSecond { disj, first } => {
                    steps.push(Step::Close(Close::Or {
                        result: goal,
                        disj,
                        other: Some((first, goal)),
                    }));
                    s.write(goal);
                    last = goal;
                }
                Purpose::IffFirst(i) => {
                    steps.push(Step::Close(Close::Plain));
                    s.open(goal, f.assumption, Purpose::IffSecond(i));
                    steps.push(Step::Assume(goal));
                    last = goal;
                }
                Purpose::IffSecond(i) => {
                    steps.push(Step::Close(Close::Iff {
                        result: i,
                        other: Some((f.goal, f.assumption)),
                    }));
                    s.write(i);
                    last = i;
                }
            }
        }
    }

    fn push(&self, out: &mut Vec<Move>, mut state: State, first: Step, last: Id) {
        let mut steps = vec![first];
        self.settle(&mut state, last, &mut steps);
        out.push(Move { steps, state });
    }

    fn push_open(&self, out: &mut Vec<Move>, s: &State, assumption: Id, goal: Id, purpose: Purpose) {
        let mut ns = s.clone();
        ns.open(assumption, goal, purpose);
        self.push(out, ns, Step::Assume(assumption), assumption);
    }

    pub(crate) fn expand(&self, s: &State, out: &mut Vec<Move>) {
        let u = self.u;
        let n = u.len();
        let mut vis = vec![false; n];
        for f in &s.frames {
            for &x in &f.lines {
                vis[x as usize] = true;
            }
        }
        let (wanted, relevant) = self.relevance(s, &vis);
        for &p in &self.premises {
            if !vis[p as usize] {
                let mut ns = s.clone();
                insert_sorted(&mut ns.frames[0].lines, p);
                let last = if s.frames.len() == 1 { p } else { NONE };
                self.push(out, ns, Step::Premise(p), last);
            }
        }
        for c in 0..n {
            if vis[c] {
                continue;
            }
            let found = u.recipes[c]
                .iter()
                .find(|rc| (if rc.intro { wanted[c] } else { relevant[c] }) && rc.cites.iter().all(|&x| x == NONE || vis[x as usize]));
            if let Some(rc) = found {
                let mut ns = s.clone();
                ns.write(c as Id);
                let step = Step::Derive {
                    rule: rc.rule,
                    conclusion: c as Id,
                    cites: rc.cites,
                };
                self.push(out, ns, step, c as Id);
            }
        }
        for w in 0..n as Id {
            if !wanted[w as usize] || vis[w as usize] {
                continue;
            }
            match u.shapes[w as usize] {
                Shape::Bin(Connective::Implies, a, b) => self.push_open(out, s, a, b, Purpose::Implies(w)),
                Shape::Bin(Connective::Iff, a, b) => self.push_open(out, s, a, b, Purpose::IffFirst(w)),
                Shape::Not(a) if !vis[a as usize] => self.push_open(out, s, a, BOTTOM, Purpose::Not(w)),
                _ => {}
            }
            if u.classical && w != BOTTOM && !matches!(u.shapes[w as usize], Shape::Not(_)) {
                let nw = u.neg[w as usize];
                let nnw = if nw == NONE { NONE } else { u.neg[nw as usize] };
                if nnw != NONE && !vis[nw as usize] && !vis[nnw as usize] {
                    self.push_open(out, s, nw, BOTTOM, Purpose::Not(nnw));
                }
            }
        }
        for d in 0..n as Id {
            let Shape::Bin(Connective::Or, a, b) = u.shapes[d as usize] else {
                continue;
            };
            if !vis[d as usize] || vis[a as usize] || vis[b as usize] {
                continue;
            }
            for w in 0..n as Id {
                if wanted[w as usize] && !vis[w as usize] {
                    self.push_open(out, s, a, w, Purpose::OrFirst { disj: d, other: b });
                }
            }
        }
    }
}

pub(crate) struct Limits {
    pub max_cost: usize,
    pub max_states: usize,
    pub deadline: Option<Instant>,
}

pub(crate) enum BfsEnd {
    Found { steps: Vec<Step>, cost: usize },
    Stopped { reason: Exhaustion, frontier: usize, explored: usize },
}

pub(crate) struct BfsReport {
    pub end: BfsEnd,
    pub states: usize,
}

fn found(goal: u32, parent: &[u32], via: &[Box<[Step]>], dist: &[u32], states: usize) -> BfsReport {
    let mut steps = Vec::new();
    let mut node = goal;
    while node != 0 {
        steps.extend(via[node as usize].iter().rev().copied());
        node = parent[node as usize];
    }
    steps.reverse();
    BfsReport {
        end: BfsEnd::Found {
            steps,
            cost: dist[goal as usize] as usize,
        },
        states,
    }
}

/// A* from `start` over a bucket queue keyed by lines written plus
/// [`Search::lower_bound`]; moves cost the number of lines they write.
pub(crate) fn bfs(search: &Search<'_>, start: &State, limits: &Limits) -> BfsReport {
    if search.is_goal(start) {
        return BfsReport {
            end: BfsEnd::Found {
                steps: Vec::new(),
                cost: 0,
            },
            states: 1,
        };
    }
    let mut index: HashMap<Rc<[Id]>, u32> = HashMap::new();
    let mut keys: Vec<Rc<[Id]>> = Vec::new();
    let mut parent: Vec<u32> = Vec::new();
    let mut via: Vec<Box<[Step]>> = Vec::new();
    let mut dist: Vec<u32> = Vec::new();
    let key: Rc<[Id]> = start.encode().into();
    index.insert(key.clone(), 0);
    keys.push(key);
    parent.push(0);
    via.push(Box::new([]));
    dist.push(0);
    // Priority each node was last queued with; stale queue entries are skipped.
    let mut queued = vec![search.lower_bound(start)];
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); queued[0] as usize + 1];
    buckets[queued[0] as usize].push(0);
    let mut best: Option<u32> = None;
    let mut succ = Vec::new();
    let mut line_limited = false;
    let mut explored = 0;
    let mut pops = 0u32;
    let mut d = 0usize;
    let stopped = |reason, frontier, explored, states| BfsReport {
        end: BfsEnd::Stopped {
            reason,
            frontier,
            explored,
        },
        states,
    };
    while d < buckets.len() {
        if let Some(goal) = best {
            if dist[goal as usize] as usize <= d {
                return found(goal, &parent, &via, &dist, keys.len());
            }
        }
        let Some(node) = buckets[d].pop() else {
            d += 1;
            continue;
        };
        let ni = node as usize;
        if queued[ni] as usize != d {
            continue;
        }
        explored = explored.max(d);
        pops = pops.wrapping_add(1);
        if pops.is_multiple_of(256) && limits.deadline.is_some_and(|t| Instant::now() >= t) {
            let frontier = buckets.iter().map(Vec::len).sum();
            return stopped(Exhaustion::Time, frontier, explored, keys.len());
        }
        let s = State::decode(&keys[ni]);
        succ.clear();
        search.expand(&s, &mut succ);
        for mv in succ.drain(..) {
            let nd = dist[ni] + mv.cost();
            // The bound is not consistent, so never rank a child below its parent.
            let f = (nd + search.lower_bound(&mv.state)).max(d as u32);
            if f as usize > limits.max_cost || best.is_some_and(|g| dist[g as usize] <= f) {
                line_limited |= f as usize > limits.max_cost;
                continue;
            }
            let key = mv.state.encode();
            let id = match index.get(&key[..]) {
                Some(&other) => {
                    let oi = other as usize;
                    if dist[oi] <= nd {
                        continue;
                    }
                    dist[oi] = nd;
                    queued[oi] = f;
                    parent[oi] = node;
                    via[oi] = mv.steps.into();
                    other
                }
                None => {
                    let id = keys.len() as u32;
                    let key: Rc<[Id]> = key.into();
                    index.insert(key.clone(), id);
                    keys.push(key);
                    parent.push(node);
                    via.push(mv.steps.into());
                    dist.push(nd);
                    queued.push(f);
                    if keys.len() > limits.max_states {
                        let frontier = buckets.iter().map(Vec::len).sum();
                        return stopped(Exhaustion::States, frontier, explored, keys.len());
                    }
                    id
                }
            };
            if search.is_goal(&mv.state) {
                best = Some(id);
                continue;
            }
            let f = f as usize;
            if buckets.len() <= f {
                buckets.resize_with(f + 1, Vec::new);
            }
            buckets[f].push(id);
        }
    }
    if let Some(goal) = best {
        return found(goal, &parent, &via, &dist, keys.len());
    }
    let reason = if line_limited { Exhaustion::Lines } else { Exhaustion::SearchSpace };
    stopped(reason, 0, explored, keys.len())
}

struct ReplayFrame {
    written: HashMap<Id, usize>,
    closed: HashMap<(Id, Id), (usize, usize)>,
    assumption: Id,
    start: usize,
    last_line: usize,
    last: Id,
}

impl ReplayFrame {
    fn new(assumption: Id, start: usize) -> Self {
        ReplayFrame {
            written: HashMap::new(),
            closed: HashMap::new(),
            assumption,
            start,
            last_line: start,
            last: assumption,
        }
    }
}

/// Turns a search path into a Fitch proof: premises first, then the
/// remaining lines in order, with lines the goal does not depend on removed.
pub(crate) fn build_proof(u: &Universe, steps: &[Step]) -> Proof {
    let mut lines: Vec<Line> = Vec::new();
    let mut frames = vec![ReplayFrame::new(NONE, 0)];
    for step in steps {
        if let Step::Premise(p) = *step {
            lines.push(Line::premise(u.claim(p).formula().unwrap().clone()));
            frames[0].written.insert(p, lines.len());
        }
    }
    let lookup = |frames: &[ReplayFrame], id: Id| -> usize {
        frames
            .iter()
            .rev()
            .find_map(|f| f.written.get(&id).copied())
            .expect("cited formula was written in scope")
    };
    let lookup_pair = |frames: &[ReplayFrame], p: (Id, Id)| -> Reference {
        let (s, e) = frames
            .iter()
            .rev()
            .find_map(|f| f.closed.get(&p).copied())
            .expect("cited subproof was closed in scope");
        Reference::Subproof(s, e)
    };
    for step in steps {
        let depth = frames.len() - 1;
        let push = |frames: &mut Vec<ReplayFrame>, lines: &mut Vec<Line>, id: Id, rule, refs, depth| {
            lines.push(Line::new(u.claim(id).clone(), rule, refs, depth));
            let n = lines.len();
            let top = frames.last_mut().unwrap();
            top.written.insert(id, n);
            top.last_line = n;
            top.last = id;
        };
        match *step {
            Step::Premise(_) => {}
            Step::Derive { rule, conclusion, cites } => {
                let refs = cites
                    .iter()
                    .filter(|&&c| c != NONE)
                    .map(|&c| Reference::Line(lookup(&frames, c)))
                    .collect();
                push(&mut frames, &mut lines, conclusion, rule, refs, depth);
            }
            Step::Assume(a) => {
                frames.push(ReplayFrame::new(a, lines.len() + 1));
                push(&mut frames, &mut lines, a, Rule::Assumption, Vec::new(), depth + 1);
            }
            Step::Reiterate(r) => {
                let refs = vec![Reference::Line(lookup(&frames, r))];
                push(&mut frames, &mut lines, r, Rule::Reiteration, refs, depth);
            }
            Step::Explode(r) => {
                let refs = vec![Reference::Line(lookup(&frames, BOTTOM))];
                push(&mut frames, &mut lines, r, Rule::BottomElim, refs, depth);
            }
            Step::Close(close) => {
                let f = frames.pop().unwrap();
                let sub = Reference::Subproof(f.start, f.last_line);
                let depth = depth - 1;
                match close {
                    Close::Plain => {
                        let parent = frames.last_mut().unwrap();
                        parent.closed.insert((f.assumption, f.last), (f.start, f.last_line));
                    }
                    Close::Implies(i) => push(&mut frames, &mut lines, i, Rule::ImpliesIntro, vec![sub], depth),
                    Close::Not(i) => push(&mut frames, &mut lines, i, Rule::NotIntro, vec![sub], depth),
                    Close::Iff { result, other } => {
                        let other = other.map_or(sub, |p| lookup_pair(&frames, p));
                        push(&mut frames, &mut lines, result, Rule::IffIntro, vec![other, sub], depth);
                    }
                    Close::Or { result, disj, other } => {
                        let d = Reference::Line(lookup(&frames, disj));
                        let other = other.map_or(sub, |p| lookup_pair(&frames, p));
                        push(&mut frames, &mut lines, result, Rule::OrElim, vec![d, other, sub], depth);
                    }
                }
            }
        }
    }
    prune(lines)
}

/// Keeps the last line and everything it transitively cites.
pub(crate) fn prune(lines: Vec<Line>) -> Proof {
    let n = lines.len();
    let mut needed = vec![false; n];
    if n > 0 {
        needed[n - 1] = true;
    }
    for i in (0..n).rev() {
        if !needed[i] {
            continue;
        }
        for r in &lines[i].refs {
            match *r {
                Reference::Line(k) => needed[k - 1] = true,
                Reference::Subproof(s, e) => {
                    needed[s - 1] = true;
                    needed[e - 1] = true;
                }
            }
        }
    }
    let mut renumber = vec![0; n + 1];
    let mut next = 0;
    for i in 0..n {
        if needed[i] {
            next += 1;
            renumber[i + 1] = next;
        }
    }
    let out = lines
        .into_iter()
        .enumerate()
        .filter(|(i, _)| needed[*i])
        .map(|(_, mut line)| {
            for r in &mut line.refs {
                *r = match *r {
                    Reference::Line(k) => Reference::Line(renumber[k]),
                    Reference::Subproof(s, e) => Reference::Subproof(renumber[s], renumber[e]),
                };
            }
            line
        })
        .collect();
    Proof::new(out)
}

pub(crate) fn input_depth(t: &[Formula], goal: &Formula) -> u32 {
    t.iter().chain(iter::once(goal)).map(Formula::depth).max().unwrap_or(0)
}

/// Search result at one depth cap.
enum CapRun {
    Found { proof: Proof, states: usize },
    Stopped { reason: Exhaustion, states: usize, frontier: usize, explored: usize },
}

fn run_at_cap(t: &[Formula], goal: &Formula, mode: DeductionMode, cap: u32, limits: &Limits) -> CapRun {
    let inputs: Vec<&Formula> = t.iter().chain(iter::once(goal)).collect();
    let Some(u) = Universe::new(&inputs, cap, mode) else {
        return CapRun::Stopped {
            reason: Exhaustion::States,
            states: 0,
            frontier: 0,
            explored: 0,
        };
    };
    let search = Search::new(&u, t, goal);
    let report = bfs(&search, &search.start(), limits);
    match report.end {
        BfsEnd::Found { steps, .. } => CapRun::Found {
            proof: build_proof(&u, &steps),
            states: report.states,
        },
        BfsEnd::Stopped {
            reason,
            frontier,
            explored,
        } => CapRun::Stopped {
            reason,
            states: report.states,
            frontier,
            explored,
        },
    }
}

/// Shortest natural deduction proof of `goal` from `t`.
///
/// Entailment is settled by truth tables first. The search starts at the
/// configured depth cap and escalates while the space at the cap is
/// exhausted. A proof is flagged minimal once a search with the cap raised
/// by one finds nothing shorter, or when raising the cap adds no formulas
/// (always the case for the default cap).
pub fn min_proof_bfs(t: &[Formula], goal: &Formula, mode: DeductionMode, budget: &ProverBudget) -> ProverOutcome {
    if !entails(t, goal) {
        return ProverOutcome::NotEntailed { states: 0 };
    }
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    let top = input_depth(t, goal);
    // Above this every negation and double negation of an input subformula is admitted.
    let saturated = top + 2;
    let mut cap = budget.max_depth.unwrap_or(saturated).max(top);
    let mut total = 0;
    let limits = |max_cost| Limits {
        max_cost,
        max_states: budget.max_states,
        deadline,
    };
    let mut best = loop {
        match run_at_cap(t, goal, mode, cap, &limits(budget.max_lines)) {
            CapRun::Found { proof, states } => {
                total += states;
                break proof;
            }
            CapRun::Stopped {
                reason,
                states,
                frontier,
                explored,
            } => {
                total += states;
                let escalate = matches!(reason, Exhaustion::SearchSpace | Exhaustion::Lines);
                if escalate && cap < saturated {
                    cap += 1;
                    continue;
                }
                return ProverOutcome::BudgetExhausted(Diagnostics {
                    reason,
                    states: total,
                    frontier,
                    explored_lines: explored,
                });
            }
        }
    };
    let minimal = loop {
        if cap >= saturated {
            break true;
        }
        match run_at_cap(t, goal, mode, cap + 1, &limits(best.len() - 1)) {
            CapRun::Found { proof, states } => {
                total += states;
                best = proof;
                cap += 1;
            }
            CapRun::Stopped { reason, states, .. } => {
                total += states;
                break matches!(reason, Exhaustion::SearchSpace | Exhaustion::Lines);
            }
        }
    };
    if let Err(e) = check_proof(&best, t, goal, mode) {
        panic!("exact prover produced an invalid proof ({e}):\n{best}");
    }
    ProverOutcome::Proved {
        length: ProofLength::new(best.len()).unwrap(),
        proof: Certificate::Fitch(best),
        minimal,
        states: total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn prove(t: &[&str], goal: &str, mode: DeductionMode) -> ProverOutcome {
        let t: Vec<Formula> = t.iter().map(|s| f(s)).collect();
        min_proof_bfs(&t, &f(goal), mode, &ProverBudget::default())
    }

    fn length(t: &[&str], goal: &str) -> usize {
        match prove(t, goal, DeductionMode::Classical) {
            ProverOutcome::Proved { length, minimal, .. } => {
                assert!(minimal, "{t:?} ⊢ {goal}");
                length.get()
            }
            other => panic!("{t:?} ⊢ {goal}: {other:?}"),
        }
    }

    #[test]
    fn basic_lengths() {
        assert_eq!(length(&["p1"], "p1"), 1);
        assert_eq!(length(&["p1", "p1 -> p2"], "p2"), 3);
        assert_eq!(length(&["p1 & p2"], "p2 & p1"), 4);
        assert_eq!(length(&[], "p1 -> p1"), 2);
        assert_eq!(length(&["p1 | p2", "~p2"], "p1"), 7);
        assert_eq!(length(&["p1", "~p1"], "p2"), 4);
        assert_eq!(length(&["~~p1"], "p1"), 2);
    }

    #[test]
    fn not_entailed_is_decided_up_front() {
        assert_eq!(
            prove(&["p1"], "p2", DeductionMode::Classical),
            ProverOutcome::NotEntailed { states: 0 }
        );
    }

    #[test]
    fn excluded_middle_needs_classical_rules() {
        assert_eq!(length(&[], "p1 | ~p1"), 9);
        let t: Vec<Formula> = Vec::new();
        let budget = ProverBudget::with_states(20_000);
        let out = min_proof_bfs(&t, &f("p1 | ~p1"), DeductionMode::Intuitionistic, &budget);
        assert!(matches!(out, ProverOutcome::BudgetExhausted(_)), "{out:?}");
    }

    #[test]
    fn state_roundtrip() {
        let mut s = State::initial(9);
        s.write(3);
        s.open(4, BOTTOM, Purpose::OrSecond { disj: 5, first: 6 });
        s.write(7);
        assert_eq!(State::decode(&s.encode()), s);
    }

    #[test]
    fn proofs_render() {
        if let ProverOutcome::Proved { proof, .. } = prove(&["p1", "p1 -> p2"], "p2", DeductionMode::Classical) {
            let text = proof.to_string();
            assert_eq!(text.lines().count(), 3);
            assert!(text.contains("Premise"));
        } else {
            panic!("expected a proof");
        }
    }
}

//! Bounded enumeration of validated models, countermodel search, a seeded
//! random-model sampler and a soundness fuzzing harness.
//!
//! Enumeration is a lexicographic extension search: for each carrier size,
//! partial orders come first, then star functions, then the ternary relation,
//! the two modal relations, the designation and the valuation. Relation cells
//! are decided absent-first in lexicographic order, with tonicity closure
//! propagated after every choice, so sparse candidates stream out first and
//! the order is canonical and deterministic.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::conditions::{evaluate_condition, ConditionError};
use crate::formula::Formula;
use crate::proofs::{check_proof, Family, Proof};
use crate::registry::{logic_conditions, LogicSpec, RegistryError};
use crate::semantics::{interpret, StateSet};
use crate::structures::{designation_report, Designation, Model, Structure};

/// Which designation style to search for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    L,
    W,
}

#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub max_states: usize,
    /// Extra propositional variables beyond those of the query formula.
    pub variables: Vec<String>,
    pub max_seconds: f64,
    pub workers: usize,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_states: 4,
            variables: Vec::new(),
            max_seconds: 60.0,
            workers: 1,
        }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
}

/// A found countermodel: the model, the designated state refuting the
/// formula, and the carrier size tier it was found at.
#[derive(Debug, Clone)]
pub struct Countermodel {
    pub model: Model,
    pub witness: String,
    pub states: usize,
}

/// Search result: an optional hit plus an honest account of how much of the
/// space was exhausted.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub countermodel: Option<Countermodel>,
    /// Largest carrier size fully exhausted without a hit.
    pub exhausted_states: usize,
    pub timed_out: bool,
}

// ---------------------------------------------------------------------------
// Component enumeration

/// All partial orders on `n` points as up-sets, in increasing encoding
/// order. With `bounded`, index 0 is the bottom and index 1 the top.
fn enumerate_posets(n: usize, bounded: bool) -> Vec<Vec<StateSet>> {
    let mut pairs = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t {
                pairs.push((s, t));
            }
        }
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut up = vec![StateSet::empty(); n];
        for s in 0..n {
            up[s].insert(s);
        }
        for (i, &(s, t)) in pairs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                up[s].insert(t);
            }
        }
        if bounded {
            if up[0] != StateSet::full(n) {
                continue;
            }
            if (0..n).any(|s| !up[s].contains(1)) || up[1] != StateSet::singleton(1) {
                continue;
            }
        }
        let antisym = (0..n).all(|s| {
            ((s + 1)..n).all(|t| !(up[s].contains(t) && up[t].contains(s)))
        });
        if !antisym {
            continue;
        }
        let transitive = (0..n).all(|s| up[s].iter().all(|t| up[t].is_subset_of(up[s])));
        if !transitive {
            continue;
        }
        out.push(up);
    }
    out
}

/// All antitone star functions for an order; with `bounded`, the bounds
/// swap is forced.
fn enumerate_stars(up: &[StateSet], bounded: bool) -> Vec<Vec<usize>> {
    let n = up.len();
    let mut out = Vec::new();
    let mut star = vec![0usize; n];
    loop {
        let fixed_ok = !bounded || (star[0] == 1 && star[1] == 0);
        if fixed_ok {
            let antitone = (0..n).all(|s| {
                up[s]
                    .iter()
                    .all(|t| up[star[t]].contains(star[s]))
            });
            if antitone {
                out.push(star.clone());
            }
        }
        // odometer
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            star[i] += 1;
            if star[i] < n {
                break;
            }
            star[i] = 0;
        }
    }
}

fn up_closed_sets(up: &[StateSet]) -> Vec<StateSet> {
    let n = up.len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let set = StateSet::from_indices((0..n).filter(|&i| mask & (1 << i) != 0));
        if set.iter().all(|s| up[s].is_subset_of(set)) {
            out.push(set);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Relation DFS with tonicity propagation

const UNDECIDED: i8 = -1;
const ABSENT: i8 = 0;
const PRESENT: i8 = 1;

struct Orders {
    up: Vec<StateSet>,
    down: Vec<StateSet>,
}

impl Orders {
    fn new(up: &[StateSet]) -> Orders {
        let n = up.len();
        let mut down = vec![StateSet::empty(); n];
        for s in 0..n {
            for t in up[s].iter() {
                down[t].insert(s);
            }
        }
        Orders {
            up: up.to_vec(),
            down,
        }
    }
}

/// Set a ternary cell present and propagate `R(s,t,u), s'<=s, t'<=t, u<=u'
/// => R(s',t',u')`. Returns false on conflict with an absent cell; `changed`
/// records newly present cells for backtracking.
fn r_set_present(
    cells: &mut [i8],
    n: usize,
    ord: &Orders,
    s: usize,
    t: usize,
    u: usize,
    changed: &mut Vec<usize>,
) -> bool {
    for s2 in ord.down[s].iter() {
        for t2 in ord.down[t].iter() {
            for u2 in ord.up[u].iter() {
                let i = (s2 * n + t2) * n + u2;
                match cells[i] {
                    PRESENT => {}
                    ABSENT => return false,
                    _ => {
                        cells[i] = PRESENT;
                        changed.push(i);
                    }
                }
            }
        }
    }
    true
}

/// Binary analogue for the `down, up` tonicity of `Q`/`QL`.
fn bin_set_present(
    cells: &mut [i8],
    n: usize,
    ord: &Orders,
    s: usize,
    t: usize,
    changed: &mut Vec<usize>,
) -> bool {
    for s2 in ord.down[s].iter() {
        for t2 in ord.up[t].iter() {
            let i = s2 * n + t2;
            match cells[i] {
                PRESENT => {}
                ABSENT => return false,
                _ => {
                    cells[i] = PRESENT;
                    changed.push(i);
                }
            }
        }
    }
    true
}

/// Families of cells of which at least one must be present (watches for the
/// existential laws L1 and ER during the ternary search).
fn watches_satisfiable(cells: &[i8], families: &[Vec<usize>]) -> bool {
    families
        .iter()
        .all(|fam| fam.iter().any(|&i| cells[i] != ABSENT))
}

/// Earliest point at which a condition's vocabulary is fully decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    AfterR,
    AfterQ,
    AfterQl,
    AtDesignation,
}

fn stage_of(c: &crate::registry::NamedCondition, kind: Kind) -> Stage {
    let v = c.condition.vocabulary();
    debug_assert!(
        !(v.in_w && kind == Kind::L) && !(v.in_l && kind == Kind::W),
        "condition vocabulary does not fit the search kind"
    );
    if v.in_w {
        Stage::AtDesignation
    } else if v.ql {
        Stage::AfterQl
    } else if v.q {
        Stage::AfterQ
    } else {
        Stage::AfterR
    }
}

struct Searcher<'a> {
    n: usize,
    kind: Kind,
    spec: &'a LogicSpec,
    vars: &'a [String],
    deadline: Option<Instant>,
    names: Vec<String>,
    ord: Orders,
    star: Vec<usize>,
    l_set: StateSet,
    // watch families over ternary cell indices
    r_watches: Vec<Vec<usize>>,
    // indices into spec.conditions, by evaluation stage
    stage_r: Vec<usize>,
    stage_q: Vec<usize>,
    stage_ql: Vec<usize>,
    stage_des: Vec<usize>,
    nodes: u64,
    timed_out: bool,
    visitor: &'a mut dyn FnMut(&Model) -> ControlFlow<()>,
}

impl Searcher<'_> {
    /// Designation available to early-stage condition checks: the L set is
    /// fixed per block, the W set only exists at the designation stage.
    fn early_designation(&self) -> Designation {
        match self.kind {
            Kind::L => Designation::L(self.l_set),
            Kind::W => Designation::None,
        }
    }

    fn conditions_hold(&self, idxs: &[usize], st: &Structure, des: &Designation) -> bool {
        idxs.iter().all(|&i| {
            match evaluate_condition(st, des, &self.spec.conditions[i].condition) {
                Ok(out) => out.holds,
                Err(_) => {
                    debug_assert!(false, "designation kind mismatch inside enumerator");
                    false
                }
            }
        })
    }

    /// Materialize a structure from decided cells; undecided relations stay
    /// empty so earlier-stage conditions can be evaluated.
    fn build_structure(
        &self,
        r_cells: &[i8],
        q_cells: Option<&[i8]>,
        ql_cells: Option<&[i8]>,
    ) -> Structure {
        let n = self.n;
        let mut leq = Vec::new();
        for s in 0..n {
            for t in self.ord.up[s].iter() {
                leq.push((s, t));
            }
        }
        let mut r = Vec::new();
        for s in 0..n {
            for t in 0..n {
                for u in 0..n {
                    if r_cells[(s * n + t) * n + u] == PRESENT {
                        r.push((s, t, u));
                    }
                }
            }
        }
        let collect_bin = |cells: Option<&[i8]>| {
            let mut out = Vec::new();
            if let Some(cells) = cells {
                for s in 0..n {
                    for t in 0..n {
                        if cells[s * n + t] == PRESENT {
                            out.push((s, t));
                        }
                    }
                }
            }
            out
        };
        let q = collect_bin(q_cells);
        let ql = collect_bin(ql_cells);
        let bounds = match self.kind {
            Kind::L => None,
            Kind::W => Some((0, 1)),
        };
        Structure::new(
            self.names.clone(),
            &leq,
            self.star.clone(),
            &r,
            &q,
            &ql,
            bounds,
        )
    }

    fn deadline_hit(&mut self) -> bool {
        self.nodes += 1;
        if self.timed_out {
            return true;
        }
        if self.nodes % 256 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    return true;
                }
            }
        }
        false
    }

    fn has_condition(&self, tag: &str) -> bool {
        self.spec.conditions.iter().any(|c| c.tag == tag)
    }

    fn run(&mut self) -> ControlFlow<()> {
        for (i, nc) in self.spec.conditions.iter().enumerate() {
            match stage_of(nc, self.kind) {
                Stage::AfterR => self.stage_r.push(i),
                Stage::AfterQ => self.stage_q.push(i),
                Stage::AfterQl => self.stage_ql.push(i),
                Stage::AtDesignation => self.stage_des.push(i),
            }
        }
        // level 3: the ternary relation
        let n = self.n;
        let mut cells = vec![UNDECIDED; n * n * n];
        if self.kind == Kind::W {
            // bottom row is forced full by R010 and tonicity; the top row is
            // constrained to the bound columns
            let mut changed = Vec::new();
            if !r_set_present(&mut cells, n, &self.ord, 0, 1, 0, &mut changed) {
                return ControlFlow::Continue(());
            }
            for s in 0..n {
                for t in 0..n {
                    if s != 0 && t != 1 {
                        let i = (1 * n + s) * n + t;
                        if cells[i] == PRESENT {
                            return ControlFlow::Continue(());
                        }
                        cells[i] = ABSENT;
                    }
                }
            }
        } else {
            // (L2) forbids Rstu with t not below u on L-rows; L is upward
            // closed, so propagation never reaches an L-row from outside
            for s in self.l_set.iter() {
                for t in 0..n {
                    for u in 0..n {
                        if !self.ord.up[t].contains(u) {
                            cells[(s * n + t) * n + u] = ABSENT;
                        }
                    }
                }
            }
            // (Rd) forces the star diagonal
            if self.has_condition("Rd") {
                for s in 0..n {
                    let mut changed = Vec::new();
                    if !r_set_present(
                        &mut cells,
                        n,
                        &self.ord,
                        s,
                        self.star[s],
                        s,
                        &mut changed,
                    ) {
                        return ControlFlow::Continue(());
                    }
                }
            }
        }
        // watches: (L1) for the L designation, (ER) when that condition is on
        self.r_watches.clear();
        if self.kind == Kind::L {
            for s in 0..n {
                self.r_watches.push(
                    self.l_set
                        .iter()
                        .map(|x| (x * n + s) * n + s)
                        .collect(),
                );
            }
            if self.has_condition("ER") {
                for s in 0..n {
                    self.r_watches.push(
                        self.l_set
                            .iter()
                            .map(|x| (s * n + x) * n + s)
                            .collect(),
                    );
                }
            }
            if !watches_satisfiable(&cells, &self.r_watches) {
                return ControlFlow::Continue(());
            }
        }
        self.r_dfs(&mut cells, 0)
    }

    fn r_dfs(&mut self, cells: &mut Vec<i8>, pos: usize) -> ControlFlow<()> {
        if self.deadline_hit() {
            return ControlFlow::Break(());
        }
        let n = self.n;
        let mut i = pos;
        while i < cells.len() && cells[i] != UNDECIDED {
            i += 1;
        }
        if i == cells.len() {
            return self.q_level(cells);
        }
        // absent first: sparse relations come out before dense ones
        cells[i] = ABSENT;
        if watches_satisfiable(cells, &self.r_watches) {
            self.r_dfs(cells, i + 1)?;
        }
        cells[i] = UNDECIDED;

        let (s, rest) = (i / (n * n), i % (n * n));
        let (t, u) = (rest / n, rest % n);
        let mut changed = Vec::new();
        let mut ok = r_set_present(cells, n, &self.ord, s, t, u, &mut changed);
        if ok && self.kind == Kind::L {
            // newly present cells must respect (L2)
            ok = changed.iter().all(|&c| {
                let (a, rest) = (c / (n * n), c % (n * n));
                let (b, d) = (rest / n, rest % n);
                !self.l_set.contains(a) || self.ord.up[b].contains(d)
            });
        }
        if ok {
            self.r_dfs(cells, i + 1)?;
        }
        for &c in &changed {
            cells[c] = UNDECIDED;
        }
        ControlFlow::Continue(())
    }

    fn q_level(&mut self, r_cells: &[i8]) -> ControlFlow<()> {
        if !self.stage_r.is_empty() {
            let st = self.build_structure(r_cells, None, None);
            if !self.conditions_hold(&self.stage_r.clone(), &st, &self.early_designation()) {
                return ControlFlow::Continue(());
            }
        }
        let n = self.n;
        let mut cells = vec![UNDECIDED; n * n];
        if self.kind == Kind::W {
            let mut changed = Vec::new();
            if !bin_set_present(&mut cells, n, &self.ord, 0, 0, &mut changed) {
                return ControlFlow::Continue(());
            }
            for t in 0..n {
                if t != 1 {
                    let i = n + t;
                    if cells[i] == PRESENT {
                        return ControlFlow::Continue(());
                    }
                    cells[i] = ABSENT;
                }
            }
        }
        if self.has_condition("BoxT") {
            for s in 0..n {
                let mut changed = Vec::new();
                if !bin_set_present(&mut cells, n, &self.ord, s, s, &mut changed) {
                    return ControlFlow::Continue(());
                }
            }
        }
        self.bin_dfs(r_cells, &mut cells, 0, true)
    }

    fn ql_level(&mut self, r_cells: &[i8], q_cells: &[i8]) -> ControlFlow<()> {
        if !self.stage_q.is_empty() {
            let st = self.build_structure(r_cells, Some(q_cells), None);
            if !self.conditions_hold(&self.stage_q.clone(), &st, &self.early_designation()) {
                return ControlFlow::Continue(());
            }
        }
        let n = self.n;
        let mut cells = vec![UNDECIDED; n * n];
        if self.kind == Kind::W {
            let mut changed = Vec::new();
            if !bin_set_present(&mut cells, n, &self.ord, 0, 0, &mut changed) {
                return ControlFlow::Continue(());
            }
            for t in 0..n {
                if t != 1 {
                    let i = n + t;
                    if cells[i] == PRESENT {
                        return ControlFlow::Continue(());
                    }
                    cells[i] = ABSENT;
                }
            }
        }
        let mut q_owned = q_cells.to_vec();
        // reuse bin_dfs by flagging which relation we are deciding
        self.bin_dfs_inner(r_cells, &mut q_owned, &mut cells, 0)
    }

    fn bin_dfs(
        &mut self,
        r_cells: &[i8],
        cells: &mut Vec<i8>,
        pos: usize,
        deciding_q: bool,
    ) -> ControlFlow<()> {
        if self.deadline_hit() {
            return ControlFlow::Break(());
        }
        let mut i = pos;
        while i < cells.len() && cells[i] != UNDECIDED {
            i += 1;
        }
        if i == cells.len() {
            if deciding_q {
                let snapshot = cells.clone();
                return self.ql_level(r_cells, &snapshot);
            }
            unreachable!("bin_dfs(deciding_q = false) goes through bin_dfs_inner");
        }
        cells[i] = ABSENT;
        self.bin_dfs(r_cells, cells, i + 1, deciding_q)?;
        cells[i] = UNDECIDED;

        let (s, t) = (i / self.n, i % self.n);
        let mut changed = Vec::new();
        if bin_set_present(cells, self.n, &self.ord, s, t, &mut changed) {
            self.bin_dfs(r_cells, cells, i + 1, deciding_q)?;
        }
        for &c in &changed {
            cells[c] = UNDECIDED;
        }
        ControlFlow::Continue(())
    }

    fn bin_dfs_inner(
        &mut self,
        r_cells: &[i8],
        q_cells: &mut Vec<i8>,
        cells: &mut Vec<i8>,
        pos: usize,
    ) -> ControlFlow<()> {
        if self.deadline_hit() {
            return ControlFlow::Break(());
        }
        let mut i = pos;
        while i < cells.len() && cells[i] != UNDECIDED {
            i += 1;
        }
        if i == cells.len() {
            return self.structure_complete(r_cells, q_cells, cells);
        }
        cells[i] = ABSENT;
        self.bin_dfs_inner(r_cells, q_cells, cells, i + 1)?;
        cells[i] = UNDECIDED;

        let (s, t) = (i / self.n, i % self.n);
        let mut changed = Vec::new();
        if bin_set_present(cells, self.n, &self.ord, s, t, &mut changed) {
            self.bin_dfs_inner(r_cells, q_cells, cells, i + 1)?;
        }
        for &c in &changed {
            cells[c] = UNDECIDED;
        }
        ControlFlow::Continue(())
    }

    fn structure_complete(
        &mut self,
        r_cells: &[i8],
        q_cells: &[i8],
        ql_cells: &[i8],
    ) -> ControlFlow<()> {
        let n = self.n;
        let st = self.build_structure(r_cells, Some(q_cells), Some(ql_cells));
        debug_assert!(st.validate().is_ok(), "enumerator built an invalid structure");

        if !self.stage_ql.is_empty()
            && !self.conditions_hold(&self.stage_ql.clone(), &st, &self.early_designation())
        {
            return ControlFlow::Continue(());
        }

        let designations: Vec<Designation> = match self.kind {
            Kind::L => vec![Designation::L(self.l_set)],
            Kind::W => {
                let worlds = st.possible_worlds();
                let wbits = worlds.bits();
                let mut subsets = Vec::new();
                for mask in 1u64..=wbits {
                    if mask & !wbits == 0 {
                        subsets.push(Designation::W(StateSet::from_indices(
                            (0..n).filter(|&i| mask & (1 << i) != 0),
                        )));
                    }
                }
                subsets
            }
        };

        let val_candidates: Vec<StateSet> = up_closed_sets(&self.ord.up)
            .into_iter()
            .filter(|set| match self.kind {
                Kind::L => true,
                Kind::W => set.contains(1) && !set.contains(0),
            })
            .collect();

        for des in designations {
            if !designation_report(&st, &des).is_ok() {
                continue;
            }
            if !self.conditions_hold(&self.stage_des.clone(), &st, &des) {
                continue;
            }

            // odometer over per-variable valuations
            let mut model = Model::new(st.clone(), des.clone(), BTreeMap::new());
            let k = self.vars.len();
            let mut idxs = vec![0usize; k];
            loop {
                if self.deadline_hit() {
                    return ControlFlow::Break(());
                }
                let valuation: BTreeMap<String, StateSet> = self
                    .vars
                    .iter()
                    .enumerate()
                    .map(|(j, v)| (v.clone(), val_candidates[idxs[j]]))
                    .collect();
                model.set_valuation(valuation);
                debug_assert!(model.validate().is_ok(), "enumerator built an invalid model");
                (self.visitor)(&model)?;
                // advance
                let mut j = k;
                loop {
                    if j == 0 {
                        return ControlFlow::Continue(());
                    }
                    j -= 1;
                    idxs[j] += 1;
                    if idxs[j] < val_candidates.len() {
                        break;
                    }
                    idxs[j] = 0;
                }
                if k == 0 {
                    return ControlFlow::Continue(());
                }
            }
        }
        ControlFlow::Continue(())
    }
}

/// One unit of work: a (poset, star, designation-or-nothing) prefix.
struct Block {
    up: Vec<StateSet>,
    star: Vec<usize>,
    l_set: StateSet,
}

fn blocks_for_tier(n: usize, kind: Kind) -> Vec<Block> {
    let mut blocks = Vec::new();
    if kind == Kind::W && n < 3 {
        return blocks;
    }
    if kind == Kind::W && n < 2 {
        return blocks;
    }
    for up in enumerate_posets(n, kind == Kind::W) {
        for star in enumerate_stars(&up, kind == Kind::W) {
            match kind {
                Kind::L => {
                    for l_set in up_closed_sets(&up) {
                        if l_set.is_empty() {
                            continue; // (L1) needs a witness on a nonempty carrier
                        }
                        blocks.push(Block {
                            up: up.clone(),
                            star: star.clone(),
                            l_set,
                        });
                    }
                }
                Kind::W => blocks.push(Block {
                    up: up.clone(),
                    star: star.clone(),
                    l_set: StateSet::empty(),
                }),
            }
        }
    }
    blocks
}

fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

/// Run the visitor over every validated model of the tier within one block.
/// Returns true if the block was exhausted (no timeout and no visitor stop).
fn visit_block(
    n: usize,
    kind: Kind,
    spec: &LogicSpec,
    vars: &[String],
    block: &Block,
    deadline: Option<Instant>,
    visitor: &mut dyn FnMut(&Model) -> ControlFlow<()>,
) -> (bool, bool) {
    // quick filters that depend only on the block prefix
    if kind == Kind::L {
        let has_x = spec.conditions.iter().any(|c| c.tag == "X");
        if has_x {
            let ok = block
                .l_set
                .iter()
                .all(|s| block.up[block.star[s]].contains(s));
            if !ok {
                return (true, false);
            }
        }
        let has_dn = spec.conditions.iter().any(|c| c.tag == "DN");
        if has_dn {
            let ok = (0..n).all(|s| block.star[block.star[s]] == s);
            if !ok {
                return (true, false);
            }
        }
    }
    let mut searcher = Searcher {
        n,
        kind,
        spec,
        vars,
        deadline,
        names: state_names(n),
        ord: Orders::new(&block.up),
        star: block.star.clone(),
        l_set: block.l_set,
        r_watches: Vec::new(),
        stage_r: Vec::new(),
        stage_q: Vec::new(),
        stage_ql: Vec::new(),
        stage_des: Vec::new(),
        nodes: 0,
        timed_out: false,
        visitor,
    };
    let flow = searcher.run();
    let timed_out = searcher.timed_out;
    (matches!(flow, ControlFlow::Continue(())), timed_out)
}

/// The result of enumerating one tier with a cap.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub models: Vec<Model>,
    /// False when the cap or a deadline cut the stream short.
    pub exhausted: bool,
}

/// Enumerate every validated model of the named logic with exactly `n`
/// states over `vars`, in canonical order, stopping at `limit`.
pub fn enumerate_models(
    n: usize,
    name: &str,
    kind: Kind,
    vars: &[String],
    limit: usize,
) -> Result<Enumeration, SearchError> {
    let spec = logic_conditions(name, kind == Kind::W)?;
    let mut models = Vec::new();
    let mut exhausted = true;
    for block in blocks_for_tier(n, kind) {
        if models.len() >= limit {
            exhausted = false;
            break;
        }
        let mut visitor = |m: &Model| {
            models.push(m.clone());
            if models.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        };
        let (done, _) = visit_block(n, kind, &spec, vars, &block, None, &mut visitor);
        if !done {
            exhausted = false;
            break;
        }
    }
    Ok(Enumeration { models, exhausted })
}

enum BlockOutcome {
    Pending,
    Exhausted,
    Hit(Box<Countermodel>),
    TimedOut,
}

/// Search for the smallest countermodel of `formula` among the logic's
/// models, trying carrier sizes in increasing order. Within a tier the
/// canonical enumeration order breaks ties, independent of worker count.
pub fn find_countermodel(
    formula: &Formula,
    name: &str,
    kind: Kind,
    budget: &SearchBudget,
) -> Result<SearchOutcome, SearchError> {
    if budget.max_states == 0 {
        return Err(SearchError::InvalidBudget("max_states must be >= 1".into()));
    }
    if kind == Kind::W && budget.max_states < 3 {
        return Err(SearchError::InvalidBudget(
            "W-search needs max_states >= 3 (two bounds and a world)".into(),
        ));
    }
    let spec = logic_conditions(name, kind == Kind::W)?;
    let mut vars: Vec<String> = formula.variables().into_iter().collect();
    for v in &budget.variables {
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    vars.sort();
    let deadline = Instant::now() + Duration::from_secs_f64(budget.max_seconds);
    let workers = budget.workers.max(1);

    let mut exhausted_states = 0;
    for n in 1..=budget.max_states {
        let blocks = blocks_for_tier(n, kind);
        let outcomes: Vec<Mutex<BlockOutcome>> = blocks
            .iter()
            .map(|_| Mutex::new(BlockOutcome::Pending))
            .collect();
        let next = AtomicUsize::new(0);

        let run_worker = |_: usize| {
            loop {
                let b = next.fetch_add(1, Ordering::SeqCst);
                if b >= blocks.len() {
                    return;
                }
                if Instant::now() >= deadline {
                    *outcomes[b].lock().unwrap() = BlockOutcome::TimedOut;
                    continue;
                }
                let mut hit: Option<Countermodel> = None;
                let mut visitor = |m: &Model| {
                    let ext = interpret(m, formula);
                    match m.designation.set().iter().find(|&d| !ext.contains(d)) {
                        Some(d) => {
                            hit = Some(Countermodel {
                                model: m.clone(),
                                witness: m.structure.name(d).to_string(),
                                states: n,
                            });
                            ControlFlow::Break(())
                        }
                        None => ControlFlow::Continue(()),
                    }
                };
                let (done, timed_out) = visit_block(
                    n,
                    kind,
                    &spec,
                    &vars,
                    &blocks[b],
                    Some(deadline),
                    &mut visitor,
                );
                *outcomes[b].lock().unwrap() = match hit {
                    Some(cm) => BlockOutcome::Hit(Box::new(cm)),
                    None if timed_out || !done => BlockOutcome::TimedOut,
                    None => BlockOutcome::Exhausted,
                };
            }
        };

        if workers == 1 {
            run_worker(0);
        } else {
            let rw = &run_worker;
            std::thread::scope(|scope| {
                for i in 0..workers {
                    scope.spawn(move || rw(i));
                }
            });
        }

        // resolve in canonical block order
        let mut tier_exhausted = true;
        for cell in &outcomes {
            let outcome = cell.lock().unwrap();
            match &*outcome {
                BlockOutcome::Exhausted => {}
                BlockOutcome::Hit(cm) => {
                    return Ok(SearchOutcome {
                        countermodel: Some((**cm).clone()),
                        exhausted_states,
                        timed_out: false,
                    });
                }
                BlockOutcome::TimedOut | BlockOutcome::Pending => {
                    tier_exhausted = false;
                    break;
                }
            }
        }
        if !tier_exhausted {
            return Ok(SearchOutcome {
                countermodel: None,
                exhausted_states,
                timed_out: true,
            });
        }
        exhausted_states = n;
    }
    Ok(SearchOutcome {
        countermodel: None,
        exhausted_states,
        timed_out: false,
    })
}

// ---------------------------------------------------------------------------
// Random validated models

/// Sample `count` validated L-models with up to `max_states` states over
/// `vars`, deterministically in the seed. Models are built valid: the
/// ternary relation is seeded so L1 holds, generator triples keep L2, and
/// tonicity closure is applied throughout.
pub fn random_l_models(
    max_states: usize,
    vars: &[String],
    count: usize,
    seed: u64,
) -> Vec<Model> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=max_states);
        let Some(m) = try_random_l_model(n, vars, &mut rng) else {
            continue;
        };
        debug_assert!(m.validate().is_ok(), "sampler built an invalid model:\n{}", m.validate());
        if m.validate().is_ok() {
            out.push(m);
        }
    }
    out
}

fn try_random_l_model(n: usize, vars: &[String], rng: &mut ChaCha8Rng) -> Option<Model> {
    // random order: identity plus a few transitive-closed pairs
    let mut up = vec![StateSet::empty(); n];
    for s in 0..n {
        up[s].insert(s);
    }
    for _ in 0..rng.gen_range(0..=n) {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        up[s].insert(t);
    }
    // transitive closure
    loop {
        let mut grew = false;
        for s in 0..n {
            let mut acc = up[s];
            for t in up[s].iter() {
                acc = acc.union(up[t]);
            }
            if acc != up[s] {
                up[s] = acc;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    for s in 0..n {
        for t in 0..n {
            if s != t && up[s].contains(t) && up[t].contains(s) {
                return None; // not antisymmetric; resample
            }
        }
    }
    let ord = Orders::new(&up);

    // antitone star, assigned greedily
    let mut star = vec![usize::MAX; n];
    let order: Vec<usize> = (0..n).collect();
    for &s in &order {
        let mut candidates  = Vec::new();
        'cand: for x in 0..n {
            for t in 0..n {
                if star[t] == usize::MAX {
                    continue;
                }
                if up[t].contains(s) && !up[x].contains(star[t]) {
                    continue 'cand;
                }
                if up[s].contains(t) && !up[star[t]].contains(x) {
                    continue 'cand;
                }
            }
            candidates.push(x);
        }
        if candidates.is_empty() {
            return None;
        }
        star[s] = candidates[rng.gen_range(0..candidates.len())];
    }

    // nonempty upward-closed L
    let l_seed = rng.gen_range(0..n);
    let mut l_set = up[l_seed];
    for s in 0..n {
        if rng.gen_bool(0.2) {
            l_set = l_set.union(up[s]);
        }
    }

    // R: seed L1 witnesses, then random triples that keep L2 after closure:
    // a generator triple either satisfies t <= u or sits on a row with no
    // L-state below it
    let mut cells = vec![ABSENT; n * n * n];
    let add = |cells: &mut Vec<i8>, s: usize, t: usize, u: usize| -> bool {
        // closure over an all-absent lattice cannot conflict; flip to
        // undecided semantics by treating ABSENT as assignable
        for s2 in ord.down[s].iter() {
            for t2 in ord.down[t].iter() {
                for u2 in ord.up[u].iter() {
                    cells[(s2 * n + t2) * n + u2] = PRESENT;
                }
            }
        }
        true
    };
    for s in 0..n {
        let witnesses: Vec<usize> = l_set.iter().collect();
        let x = witnesses[rng.gen_range(0..witnesses.len())];
        add(&mut cells, x, s, s);
    }
    for _ in 0..rng.gen_range(0..=(n * n)) {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let u = rng.gen_range(0..n);
        let row_touches_l = ord.down[s].iter().any(|s2| l_set.contains(s2));
        if up[t].contains(u) || !row_touches_l {
            add(&mut cells, s, t, u);
        }
    }

    // Q, QL: random pairs, tonicity-closed
    let mut q_cells = vec![ABSENT; n * n];
    let mut ql_cells = vec![ABSENT; n * n];
    for cells2 in [&mut q_cells, &mut ql_cells] {
        for _ in 0..rng.gen_range(0..=(n * n) / 2 + 1) {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            for s2 in ord.down[s].iter() {
                for t2 in ord.up[t].iter() {
                    cells2[s2 * n + t2] = PRESENT;
                }
            }
        }
    }

    let mut leq = Vec::new();
    for s in 0..n {
        for t in up[s].iter() {
            leq.push((s, t));
        }
    }
    let mut r = Vec::new();
    for s in 0..n {
        for t in 0..n {
            for u in 0..n {
                if cells[(s * n + t) * n + u] == PRESENT {
                    r.push((s, t, u));
                }
            }
        }
    }
    let mut q = Vec::new();
    let mut ql = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if q_cells[s * n + t] == PRESENT {
                q.push((s, t));
            }
            if ql_cells[s * n + t] == PRESENT {
                ql.push((s, t));
            }
        }
    }
    let st = Structure::new(state_names(n), &leq, star, &r, &q, &ql, None);
    let valuation = vars
        .iter()
        .map(|v| {
            let mut set = StateSet::empty();
            for s in 0..n {
                if rng.gen_bool(0.4) {
                    set = set.union(up[s]);
                }
            }
            (v.clone(), set)
        })
        .collect();
    Some(Model::new(st, Designation::L(l_set), valuation))
}

// ---------------------------------------------------------------------------
// Soundness fuzzing

#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub checked: usize,
    pub rejected: usize,
    /// `(proof index, countermodel)` pairs; must be empty for a sound
    /// system.
    pub violations: Vec<(usize, Countermodel)>,
}

/// For every accepted proof in the corpus, search for a countermodel to its
/// conclusion. Any hit is a soundness violation.
pub fn soundness_fuzz(
    name: &str,
    family: Family,
    proofs: &[Proof],
    budget: &SearchBudget,
) -> Result<FuzzReport, SearchError> {
    let kind = match family {
        Family::L => Kind::L,
        Family::CL => Kind::W,
    };
    let mut checked = 0;
    let mut rejected = 0;
    let mut violations = Vec::new();
    for (i, p) in proofs.iter().enumerate() {
        if !check_proof(p).accepted {
            rejected += 1;
            continue;
        }
        let Some(conclusion) = p.conclusion() else {
            rejected += 1;
            continue;
        };
        checked += 1;
        let outcome = find_countermodel(conclusion, name, kind, budget)?;
        if let Some(cm) = outcome.countermodel {
            violations.push((i, cm));
        }
    }
    Ok(FuzzReport {
        checked,
        rejected,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::valid;

    #[test]
    fn one_state_bm_models() {
        let vars = vec!["p".to_string()];
        let e = enumerate_models(1, "BM.C", Kind::L, &vars, 100).unwrap();
        assert!(e.exhausted);
        // single state: leq, star, L forced; R must contain (s,s,s) for L1;
        // R in {sss}, Q in {∅,{ss}}, QL likewise, V(p) in {∅,{s}}
        assert_eq!(e.models.len(), 8);
        for m in &e.models {
            assert!(m.validate().is_ok());
            assert!(valid(m, &parse("p -> p").unwrap()).unwrap());
        }
    }

    #[test]
    fn w_enumeration_empty_below_three() {
        let vars = vec!["p".to_string()];
        for n in 1..=2 {
            let e = enumerate_models(n, "BM.C", Kind::W, &vars, 10).unwrap();
            assert!(e.exhausted);
            assert!(e.models.is_empty(), "n={n}");
        }
    }

    #[test]
    fn w_enumeration_finds_three_state_models() {
        let vars = vec!["p".to_string()];
        let e = enumerate_models(3, "BM.C", Kind::W, &vars, 5).unwrap();
        assert!(!e.models.is_empty());
        for m in &e.models {
            assert!(m.validate().is_ok(), "{}", m.validate());
            assert_eq!(m.designation.kind(), "W");
        }
    }

    #[test]
    fn box_contradiction_countermodel_found() {
        let f = parse("[](p & ~p) -> []q").unwrap();
        let budget = SearchBudget {
            max_states: 4,
            max_seconds: 30.0,
            ..Default::default()
        };
        let out = find_countermodel(&f, "BM.C", Kind::L, &budget).unwrap();
        let cm = out.countermodel.expect("countermodel expected");
        assert!(cm.states <= 2, "found at tier {}", cm.states);
        assert!(cm.model.validate().is_ok());
        assert!(!valid(&cm.model, &f).unwrap());
    }

    #[test]
    fn identity_axiom_has_no_small_countermodel() {
        let f = parse("p -> p").unwrap();
        let budget = SearchBudget {
            max_states: 2,
            max_seconds: 20.0,
            ..Default::default()
        };
        let out = find_countermodel(&f, "BM.C", Kind::L, &budget).unwrap();
        assert!(out.countermodel.is_none());
    }

    #[test]
    fn random_models_validate() {
        let vars = vec!["p".to_string(), "q".to_string()];
        let models = random_l_models(4, &vars, 50, 1234);
        assert_eq!(models.len(), 50);
        for m in &models {
            assert!(m.validate().is_ok(), "{}", m.validate());
        }
    }

    #[test]
    fn determinism_across_workers() {
        let f = parse("[](p & ~p) -> []q").unwrap();
        let one = find_countermodel(
            &f,
            "BM.C",
            Kind::L,
            &SearchBudget {
                workers: 1,
                max_seconds: 30.0,
                ..Default::default()
            },
        )
        .unwrap();
        let eight = find_countermodel(
            &f,
            "BM.C",
            Kind::L,
            &SearchBudget {
                workers: 8,
                max_seconds: 30.0,
                ..Default::default()
            },
        )
        .unwrap();
        let a = one.countermodel.unwrap();
        let b = eight.countermodel.unwrap();
        assert_eq!(a.model.to_json(), b.model.to_json());
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn w_budget_validation() {
        let f = parse("p").unwrap();
        let budget = SearchBudget {
            max_states: 2,
            ..Default::default()
        };
        assert!(matches!(
            find_countermodel(&f, "BM.C", Kind::W, &budget),
            Err(SearchError::InvalidBudget(_))
        ));
    }
}

//! Symbolic partition-relation refinement of the stuttering simulation
//! preorder.
//!
//! The engine keeps a partition-relation pair `⟨P, ⊴⟩` whose induced map
//! `μ` over-approximates the stuttering simulator sets. Each iteration
//! finds a refiner `(B, C)`, computes `S = pos(μ(B), μ(C))`, splits the
//! partition by `S` without changing `μ`, and then prunes `⊴` so that blocks
//! inside `S` only keep simulators inside `S`. The loop stops when no
//! refiner is left, at which point `μ` is the stuttering simulation
//! preorder.
//!
//! Finding refiners quickly relies on bookkeeping maintained across
//! iterations:
//!
//! * `count(s, C)`: number of transitions from `s` into `μ(C)`, so that
//!   `count(s, C) == 0` iff `s ∉ pre(μ(C))`;
//! * `bcount(B, C)`: the sum of `count(s, C)` over `s ∈ B`;
//! * the local bottom states of every block `B`, i.e. members of `B` with
//!   no transition back into `μ(B)`;
//! * the bottom blocks of `B`: strict successors `B ◁ C` containing a
//!   bottom state of `μ(B)`.
//!
//! The state list is kept free of backward transitions between equally
//! labelled states and the block list in reverse topological order of
//! `◁`. Inert cycles are collapsed up front.

mod invariants;
mod pos;
mod refine;
mod refiner;
mod split;

use thiserror::Error;

use crate::kripke::{KripkeStructure, StateId};
use crate::partition::{BlockId, Partition, PartitionRelationPair};
use crate::preprocess::{
    collapse_inert_sccs, inert_sccs, inert_topological_rank, sort_blocks_reverse_topological,
    CollapseMap, PreprocessError,
};
use crate::relation::Relation;
use crate::result::SimulationResult;

pub use invariants::InvariantViolation;
pub use refiner::RefinerEvidence;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("input partition covers {found} states, structure has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("block relation is not reflexive at block {0:?}")]
    NotReflexive(Vec<StateId>),
    #[error("block relation is not transitive: {0:?} ⊴ {1:?} ⊴ {2:?}")]
    NotTransitive(Vec<StateId>, Vec<StateId>, Vec<StateId>),
    #[error("block {block:?} is below block {above:?}, which carries a different label")]
    LabelMismatch {
        block: Vec<StateId>,
        above: Vec<StateId>,
    },
    #[error("states {0:?} form a cycle of equally labelled states but lie in different blocks")]
    SplitsInertCycle(Vec<StateId>),
    #[error("no state order keeps blocks contiguous without backward transitions between equally labelled states")]
    NoLocalTopologicalLayout,
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
}

/// Counters describing a run of the main loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Main-loop iterations, i.e. refiners processed.
    pub iterations: usize,
    /// Blocks produced by splits. Every split parent counts twice, once
    /// for each part.
    pub new_blocks: usize,
    /// Blocks of the input partition after collapsing.
    pub initial_blocks: usize,
    /// Blocks of the current partition.
    pub blocks: usize,
}

/// What one main-loop iteration did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// 1-based iteration number.
    pub iteration: usize,
    pub refiner: (BlockId, BlockId),
    /// Size of the splitter `pos(μ(B), μ(C))`.
    pub splitter_len: usize,
    pub blocks: usize,
}

pub struct EngineState {
    k: KripkeStructure,
    collapse: CollapseMap,
    classes: Vec<usize>,
    pr: PartitionRelationPair,
    count: Vec<Vec<u32>>,
    bcount: Vec<Vec<u32>>,
    local_bottoms: Vec<Vec<StateId>>,
    bottom_blocks: Vec<Vec<BlockId>>,
    state_mark1: Vec<bool>,
    state_mark2: Vec<bool>,
    block_mark: Vec<bool>,
    block_mark2: Vec<bool>,
    stats: RunStats,
    steppable: bool,
}

impl EngineState {
    /// Engine for `⟨P_ℓ, id⟩`, the labelling partition with the identity
    /// relation.
    pub fn new(k: &KripkeStructure) -> Self {
        let blocks = k.labeling_partition();
        let partition = Partition::from_blocks(k.num_states(), &blocks)
            .expect("labelling partition is well formed");
        Self::build(k, &PartitionRelationPair::identity(partition), true)
            .expect("labelling partition satisfies every precondition")
    }

    /// Engine for an arbitrary input pair. The relation must be a preorder,
    /// every block may only be related to blocks with the same label, and
    /// no cycle of equally labelled states may straddle two blocks.
    pub fn with_relation(k: &KripkeStructure, input: &PartitionRelationPair) -> Result<Self, EngineError> {
        Self::build(k, input, true)
    }

    /// Engine for a single refiner search: the state list need not support
    /// `pos`, so inputs without a valid layout are accepted.
    pub(crate) fn for_checking(k: &KripkeStructure, input: &PartitionRelationPair) -> Result<Self, EngineError> {
        Self::build(k, input, false)
    }

    fn build(k: &KripkeStructure, input: &PartitionRelationPair, require_layout: bool) -> Result<Self, EngineError> {
        validate_input(k, input)?;
        let label_classes = k.label_classes();

        let block_of_input = |s: StateId| input.partition.block_of(s);
        for scc in inert_sccs(k, &label_classes) {
            let b = block_of_input(scc[0]);
            if scc.iter().any(|&s| block_of_input(s) != b) {
                return Err(EngineError::SplitsInertCycle(scc));
            }
        }
        let (collapsed, collapse) = collapse_inert_sccs(k, &label_classes);
        let classes = collapsed.label_classes();

        // Re-express the input pair over collapsed states. Block i of the
        // new partition is the i-th block of the input block list.
        let input_order = input.partition.block_list();
        let mut blocks: Vec<Vec<StateId>> = vec![Vec::new(); input_order.len()];
        let mut slot = vec![usize::MAX; input.partition.id_bound()];
        for (i, b) in input_order.iter().enumerate() {
            slot[b.0] = i;
        }
        for c in collapsed.states() {
            let original = collapse.members(c)[0];
            blocks[slot[block_of_input(original).0]].push(c);
        }
        let mut pr = PartitionRelationPair::identity(
            Partition::from_blocks(collapsed.num_states(), &blocks).expect("every input block keeps a state"),
        );
        for (i, &b) in input_order.iter().enumerate() {
            for (j, &c) in input_order.iter().enumerate() {
                if input.leq(b, c) {
                    pr.rel.set(BlockId(i), BlockId(j), true);
                }
            }
        }

        let order = sort_blocks_reverse_topological(&pr)?;
        pr.partition.set_block_list(order);

        let rank = inert_topological_rank(&collapsed, &classes)?;
        let (layout, steppable) = match state_layout(&collapsed, &classes, &pr.partition) {
            Some(layout) => (layout, true),
            None if require_layout => return Err(EngineError::NoLocalTopologicalLayout),
            None => (pr.partition.block_list().to_vec(), false),
        };
        pr.partition.relayout(&layout, &rank);

        let n = collapsed.num_states();
        let ids = pr.partition.id_bound();
        let mut engine = EngineState {
            k: collapsed,
            collapse,
            classes,
            pr,
            count: vec![vec![0; ids]; n],
            bcount: vec![vec![0; ids]; ids],
            local_bottoms: vec![Vec::new(); ids],
            bottom_blocks: vec![Vec::new(); ids],
            state_mark1: vec![false; n],
            state_mark2: vec![false; n],
            block_mark: vec![false; ids],
            block_mark2: vec![false; ids],
            stats: RunStats {
                initial_blocks: ids,
                blocks: ids,
                ..RunStats::default()
            },
            steppable,
        };
        engine.initialize_counters();
        Ok(engine)
    }

    fn initialize_counters(&mut self) {
        let blocks = self.pr.partition.block_list().to_vec();
        for (x, y) in self.k.transitions() {
            let target = self.pr.partition.block_of(y);
            for &c in &blocks {
                if self.pr.leq(c, target) {
                    self.count[x.0][c.0] += 1;
                }
            }
        }
        for &b in &blocks {
            for &x in self.pr.partition.members(b) {
                for &c in &blocks {
                    self.bcount[b.0][c.0] += self.count[x.0][c.0];
                }
            }
        }
        for &b in &blocks {
            self.local_bottoms[b.0] = self
                .pr
                .partition
                .members(b)
                .iter()
                .copied()
                .filter(|x| self.count[x.0][b.0] == 0)
                .collect();
            self.bottom_blocks[b.0] = blocks
                .iter()
                .copied()
                .filter(|&c| {
                    c != b
                        && self.pr.leq(b, c)
                        && self.pr.partition.members(c).iter().any(|x| self.count[x.0][b.0] == 0)
                })
                .collect();
        }
    }

    /// Grows every block-indexed table to hold `ids` identifiers.
    fn grow_tables(&mut self, ids: usize) {
        for row in &mut self.count {
            row.resize(ids, 0);
        }
        for row in &mut self.bcount {
            row.resize(ids, 0);
        }
        self.bcount.resize(ids, vec![0; ids]);
        self.pr.rel.grow(ids);
        self.local_bottoms.resize(ids, Vec::new());
        self.bottom_blocks.resize(ids, Vec::new());
        self.block_mark.resize(ids, false);
        self.block_mark2.resize(ids, false);
    }

    /// The structure being refined, after inert cycles were collapsed.
    pub fn structure(&self) -> &KripkeStructure {
        &self.k
    }

    pub fn collapse_map(&self) -> &CollapseMap {
        &self.collapse
    }

    pub fn pair(&self) -> &PartitionRelationPair {
        &self.pr
    }

    pub fn stats(&self) -> RunStats {
        self.stats
    }

    pub fn count(&self, s: StateId, c: BlockId) -> u32 {
        self.count[s.0][c.0]
    }

    pub fn bcount(&self, b: BlockId, c: BlockId) -> u32 {
        self.bcount[b.0][c.0]
    }

    pub fn local_bottoms(&self, b: BlockId) -> &[StateId] {
        &self.local_bottoms[b.0]
    }

    pub fn bottom_blocks(&self, b: BlockId) -> &[BlockId] {
        &self.bottom_blocks[b.0]
    }

    /// `μ(B)` as a list: members of every `C` with `B ⊴ C`, taken in
    /// state-list order so that the list is a sublist of the state list.
    pub fn image(&self, b: BlockId) -> Vec<StateId> {
        let p = &self.pr.partition;
        p.blocks_in_state_order()
            .filter(|&c| self.pr.leq(b, c))
            .flat_map(|c| p.members(c).iter().copied())
            .collect()
    }

    /// Runs one iteration of the main loop. Returns `None` once no refiner
    /// is left.
    pub fn step(&mut self) -> Option<Step> {
        assert!(self.steppable, "engine was built for checking only");
        let (b, c) = self.find_refiner()?;
        let from = self.image(b);
        let to = self.image(c);
        let splitter = self.pos_ordered(&from, &to);
        self.splitting_procedure(&splitter);
        self.refine(&splitter);
        self.stats.iterations += 1;
        self.stats.blocks = self.pr.partition.num_blocks();
        Some(Step {
            iteration: self.stats.iterations,
            refiner: (b, c),
            splitter_len: splitter.len(),
            blocks: self.stats.blocks,
        })
    }

    /// Iterates until no refiner is left.
    pub fn run_to_fixpoint(&mut self) {
        while self.step().is_some() {}
    }

    /// Original states of block `b`, ascending.
    pub fn original_members(&self, b: BlockId) -> Vec<StateId> {
        let mut out: Vec<StateId> = self
            .pr
            .partition
            .members(b)
            .iter()
            .flat_map(|&c| self.collapse.members(c).iter().copied())
            .collect();
        out.sort();
        out
    }

    /// The state relation induced by the current pair, over original
    /// states.
    pub fn state_relation(&self) -> Relation {
        let n = self.collapse.num_original();
        let mut r = Relation::empty(n);
        let block_of = |s: StateId| self.pr.partition.block_of(self.collapse.representative(s));
        for x in 0..n {
            for y in 0..n {
                let (x, y) = (StateId(x), StateId(y));
                if self.pr.leq(block_of(x), block_of(y)) {
                    r.insert(x, y);
                }
            }
        }
        r
    }

    pub fn into_result(self) -> SimulationResult {
        let blocks: Vec<Vec<StateId>> = self
            .pr
            .partition
            .block_list()
            .iter()
            .map(|&b| self.original_members(b))
            .collect();
        let list = self.pr.partition.block_list();
        let leq: Vec<Vec<bool>> = list
            .iter()
            .map(|&b| list.iter().map(|&c| self.pr.leq(b, c)).collect())
            .collect();
        SimulationResult::from_blocks(self.collapse.num_original(), blocks, leq, self.stats)
    }
}

fn validate_input(k: &KripkeStructure, input: &PartitionRelationPair) -> Result<(), EngineError> {
    let p = &input.partition;
    if p.num_states() != k.num_states() {
        return Err(EngineError::SizeMismatch {
            expected: k.num_states(),
            found: p.num_states(),
        });
    }
    let members = |b: BlockId| {
        let mut m = p.members(b).to_vec();
        m.sort();
        m
    };
    if let Some(b) = input.reflexivity_violation() {
        return Err(EngineError::NotReflexive(members(b)));
    }
    if let Some((b, c, d)) = input.transitivity_violation() {
        return Err(EngineError::NotTransitive(members(b), members(c), members(d)));
    }
    for &b in p.block_list() {
        let label = k.label(p.members(b)[0]);
        for c in input.above(b) {
            if p.members(c).iter().any(|&s| k.label(s) != label) {
                return Err(EngineError::LabelMismatch {
                    block: members(b),
                    above: members(c),
                });
            }
        }
        if p.members(b).iter().any(|&s| k.label(s) != label) {
            return Err(EngineError::LabelMismatch {
                block: members(b),
                above: members(b),
            });
        }
    }
    Ok(())
}

/// Orders blocks so that every transition between equally labelled states
/// in different blocks goes forward. Ties follow the block list. `None` if
/// the constraints are cyclic.
fn state_layout(k: &KripkeStructure, classes: &[usize], p: &Partition) -> Option<Vec<BlockId>> {
    let list = p.block_list();
    let mut slot = vec![usize::MAX; p.id_bound()];
    for (i, b) in list.iter().enumerate() {
        slot[b.0] = i;
    }
    let n = list.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for (x, y) in k.transitions() {
        let (bx, by) = (slot[p.block_of(x).0], slot[p.block_of(y).0]);
        if classes[x.0] == classes[y.0] && bx != by {
            succ[bx].push(by);
            indegree[by] += 1;
        }
    }
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&i| indegree[i] == 0).map(std::cmp::Reverse).collect();
    let mut layout = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(i)) = ready.pop() {
        layout.push(list[i]);
        for &j in &succ[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(std::cmp::Reverse(j));
            }
        }
    }
    (layout.len() == n).then_some(layout)
}

/// Stuttering simulation preorder of `k`.
pub fn run(k: &KripkeStructure) -> SimulationResult {
    let mut engine = EngineState::new(k);
    engine.run_to_fixpoint();
    engine.into_result()
}

/// Largest stuttering simulation contained in the relation induced by
/// `input`.
pub fn run_with_relation(k: &KripkeStructure, input: &PartitionRelationPair) -> Result<SimulationResult, EngineError> {
    let mut engine = EngineState::with_relation(k, input)?;
    engine.run_to_fixpoint();
    Ok(engine.into_result())
}

/// As [`run`], reporting every iteration to `trace`.
pub fn run_traced<F: FnMut(&Step)>(k: &KripkeStructure, mut trace: F) -> SimulationResult {
    let mut engine = EngineState::new(k);
    while let Some(step) = engine.step() {
        trace(&step);
    }
    engine.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::fixtures::{f1, f2, ids};
    use crate::kripke::Label;
    use crate::reference::naive_stuttering_simulation;

    fn block_with(engine: &EngineState, s: usize) -> BlockId {
        engine.pair().partition.block_of(engine.collapse_map().representative(StateId(s)))
    }

    #[test]
    fn counters_of_asymmetric_fixture() {
        let e = EngineState::new(&f2());
        let (p, q, r) = (block_with(&e, 0), block_with(&e, 1), block_with(&e, 2));
        assert_eq!(e.count(StateId(0), q), 1);
        assert_eq!(e.count(StateId(0), r), 1);
        assert_eq!(e.count(StateId(3), q), 1);
        for s in 0..5 {
            for c in [p, q, r] {
                let expected = matches!((s, c), (0, _) if c == q || c == r) || (s == 3 && c == q);
                assert_eq!(e.count(StateId(s), c) == 1, expected, "count({s}, {c})");
            }
        }
        assert_eq!(e.local_bottoms(p), &ids(&[0, 3])[..]);
        for b in [p, q, r] {
            assert!(e.bottom_blocks(b).is_empty());
        }
        e.check_invariants().unwrap();
    }

    #[test]
    fn without_transitions_everything_is_bottom() {
        let k = KripkeStructure::new(vec![Label::new(["a"]), Label::new(["b"]), Label::new(["a"])], [])
            .unwrap();
        let e = EngineState::new(&k);
        for &b in e.pair().partition.block_list() {
            assert_eq!(e.local_bottoms(b), e.pair().partition.members(b));
            for s in k.states() {
                assert_eq!(e.count(s, b), 0);
            }
        }
        let mut e = e;
        assert!(e.find_refiner().is_none());
    }

    #[test]
    fn stutter_chain_local_bottoms() {
        let e = EngineState::new(&f1());
        assert_eq!(e.local_bottoms(block_with(&e, 0)), &ids(&[0, 2])[..]);
    }

    #[test]
    fn image_matches_mu() {
        let e = EngineState::new(&f1());
        let b = block_with(&e, 0);
        assert_eq!(e.image(b), ids(&[0, 1, 2]));
    }

    #[test]
    fn fixture_results() {
        let r = run(&f1());
        assert_eq!(r.blocks(), &[ids(&[0, 1, 2]), ids(&[3, 4])]);
        assert_eq!(r.strict_pairs(), vec![]);

        let r = run(&f2());
        assert_eq!(r.blocks(), &[ids(&[0]), ids(&[1, 4]), ids(&[2]), ids(&[3])]);
        assert_eq!(r.strict_pairs(), vec![(3, 0)]);
        assert_eq!(r.state_relation(), naive_stuttering_simulation(&f2()));
    }

    #[test]
    fn self_loop_state() {
        let k = KripkeStructure::new(vec![Label::new(["p"])], [(0, 0)]).unwrap();
        let r = run(&k);
        assert_eq!(r.blocks(), &[ids(&[0])]);
        assert!(r.simulates(StateId(0), StateId(0)));
    }

    #[test]
    fn input_relation_is_validated() {
        let k = f2();
        let blocks = [ids(&[0, 3]), ids(&[1, 4]), ids(&[2])];
        let pr = PartitionRelationPair::from_blocks(5, &blocks, &[(0, 1)]).unwrap();
        assert!(matches!(
            EngineState::with_relation(&k, &pr),
            Err(EngineError::LabelMismatch { .. })
        ));
        let blocks = [ids(&[0]), ids(&[3]), ids(&[1, 4]), ids(&[2])];
        let pr = PartitionRelationPair::from_blocks(5, &blocks, &[(0, 1), (1, 0), (1, 1)]).unwrap();
        assert!(EngineState::with_relation(&k, &pr).is_ok());
        let blocks = [ids(&[0, 1, 2, 3, 4])];
        let pr = PartitionRelationPair::from_blocks(5, &blocks, &[]).unwrap();
        assert!(matches!(
            EngineState::with_relation(&k, &pr),
            Err(EngineError::LabelMismatch { .. })
        ));
    }

    #[test]
    fn input_may_not_split_an_inert_cycle() {
        let p = Label::new(["p"]);
        let k = KripkeStructure::new(vec![p.clone(), p], [(0, 1), (1, 0)]).unwrap();
        let pr = PartitionRelationPair::from_blocks(2, &[ids(&[0]), ids(&[1])], &[]).unwrap();
        assert_eq!(
            EngineState::with_relation(&k, &pr).err(),
            Some(EngineError::SplitsInertCycle(ids(&[0, 1])))
        );
    }

    #[test]
    fn input_relation_restricts_the_result() {
        // Identity on the finest partition is already a stuttering simulation.
        let k = f2();
        let blocks: Vec<_> = (0..5).map(|s| ids(&[s])).collect();
        let pr = PartitionRelationPair::from_blocks(5, &blocks, &[]).unwrap();
        let r = run_with_relation(&k, &pr).unwrap();
        assert_eq!(r.state_relation(), Relation::identity(5));
    }

    #[test]
    fn trace_reports_every_iteration() {
        let mut steps = Vec::new();
        let r = run_traced(&f2(), |s| steps.push(s.clone()));
        assert_eq!(steps.len(), r.stats().iterations);
        assert!(steps.iter().enumerate().all(|(i, s)| s.iteration == i + 1));
    }
}

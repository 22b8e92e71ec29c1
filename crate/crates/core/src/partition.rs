//! Ordered partitions and partition-relation pairs.
//!
//! A [`Partition`] keeps every state in one global list. The members of a
//! block always occupy a contiguous range `[begin, end)` of that list, so a
//! block is just a range plus an identifier. Blocks are additionally kept in
//! a separate block list whose order the refinement engine relies on.
//!
//! A [`PartitionRelationPair`] attaches a relation `⊴` between blocks. It
//! stands for the state relation `{ (s, t) | block(s) ⊴ block(t) }`, so
//! `mu(B)`, the union of all blocks above `B`, is the current set of
//! candidate simulators of every state in `B`.

use std::fmt;

use thiserror::Error;

use crate::kripke::{StateId, StateSet};

/// Identifier of a block. Identifiers are allocated densely and never
/// reused: splitting a block keeps the parent's id for the part outside the
/// splitter and allocates a fresh id for the part inside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockId(pub usize);

impl BlockId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub id: BlockId,
    /// Half-open range of positions in the state list.
    pub begin: usize,
    pub end: usize,
    /// The block holding `B ∩ S` while a split by `S` is being processed.
    pub intersection: Option<BlockId>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.end - self.begin
    }

    pub fn is_empty(&self) -> bool {
        self.begin == self.end
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("state {0} is outside 0..{1}")]
    StateOutOfRange(usize, usize),
    #[error("state {0} occurs in more than one block")]
    DuplicateState(usize),
    #[error("state {0} belongs to no block")]
    MissingState(usize),
    #[error("relation refers to block {0}, but there are only {1} blocks")]
    BlockOutOfRange(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Partition {
    states: Vec<StateId>,
    position: Vec<usize>,
    block_of: Vec<BlockId>,
    blocks: Vec<Block>,
    order: Vec<BlockId>,
}

impl Partition {
    /// Lays the blocks out in the given order; members keep their given
    /// order inside each block. Block `i` gets identifier `BlockId(i)`.
    pub fn from_blocks(num_states: usize, blocks: &[Vec<StateId>]) -> Result<Self, PartitionError> {
        let mut states = Vec::with_capacity(num_states);
        let mut position = vec![usize::MAX; num_states];
        let mut block_of = vec![BlockId(usize::MAX); num_states];
        let mut out = Vec::with_capacity(blocks.len());
        for (i, members) in blocks.iter().enumerate() {
            if members.is_empty() {
                return Err(PartitionError::EmptyBlock(i));
            }
            let begin = states.len();
            for &s in members {
                if s.0 >= num_states {
                    return Err(PartitionError::StateOutOfRange(s.0, num_states));
                }
                if position[s.0] != usize::MAX {
                    return Err(PartitionError::DuplicateState(s.0));
                }
                position[s.0] = states.len();
                block_of[s.0] = BlockId(i);
                states.push(s);
            }
            out.push(Block {
                id: BlockId(i),
                begin,
                end: states.len(),
                intersection: None,
            });
        }
        if let Some(s) = position.iter().position(|&p| p == usize::MAX) {
            return Err(PartitionError::MissingState(s));
        }
        Ok(Partition {
            states,
            position,
            block_of,
            order: (0..out.len()).map(BlockId).collect(),
            blocks: out,
        })
    }

    /// The partition with a single block, or none when `num_states == 0`.
    pub fn trivial(num_states: usize) -> Self {
        let blocks = if num_states == 0 {
            Vec::new()
        } else {
            vec![(0..num_states).map(StateId).collect()]
        };
        Partition::from_blocks(num_states, &blocks).expect("trivial partition is well formed")
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.order.len()
    }

    /// One past the largest identifier ever allocated.
    pub fn id_bound(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, id: BlockId) -> &Block {
        &self.blocks[id.0]
    }

    pub fn members(&self, id: BlockId) -> &[StateId] {
        let b = &self.blocks[id.0];
        &self.states[b.begin..b.end]
    }

    #[inline]
    pub fn block_of(&self, s: StateId) -> BlockId {
        self.block_of[s.0]
    }

    pub fn position(&self, s: StateId) -> usize {
        self.position[s.0]
    }

    /// The global ordered state list.
    pub fn state_list(&self) -> &[StateId] {
        &self.states
    }

    /// Block identifiers in block-list order.
    pub fn block_list(&self) -> &[BlockId] {
        &self.order
    }

    /// Block identifiers in the order their ranges appear in the state list.
    pub fn blocks_in_state_order(&self) -> impl Iterator<Item = BlockId> + '_ {
        let mut pos = 0;
        std::iter::from_fn(move || {
            if pos >= self.states.len() {
                return None;
            }
            let id = self.block_of[self.states[pos].0];
            pos = self.blocks[id.0].end;
            Some(id)
        })
    }

    /// Member lists in block-list order.
    pub fn to_blocks(&self) -> Vec<Vec<StateId>> {
        self.order.iter().map(|&b| self.members(b).to_vec()).collect()
    }

    pub(crate) fn set_block_list(&mut self, order: Vec<BlockId>) {
        debug_assert_eq!(order.len(), self.order.len());
        self.order = order;
    }

    /// Rewrites the state list, keeping every block contiguous. `layout`
    /// lists blocks in the order their ranges should appear; `rank` orders
    /// states inside each block.
    pub(crate) fn relayout(&mut self, layout: &[BlockId], rank: &[usize]) {
        let mut states = Vec::with_capacity(self.states.len());
        for &id in layout {
            let mut members = self.members(id).to_vec();
            members.sort_by_key(|s| rank[s.0]);
            let begin = states.len();
            states.extend(members);
            let b = &mut self.blocks[id.0];
            b.begin = begin;
            b.end = states.len();
        }
        for (p, s) in states.iter().enumerate() {
            self.position[s.0] = p;
        }
        self.states = states;
    }

    /// Replaces every block `B` meeting `splitter` without being contained
    /// in it by `B ∩ S` followed by `B ∖ S`, in the block list and in the
    /// state list alike. States of `B ∩ S` are placed in splitter order,
    /// states of `B ∖ S` keep their relative order. `B ∖ S` keeps the id of
    /// `B`; `B ∩ S` gets a fresh id recorded in `B.intersection`.
    ///
    /// Returns the split parents in order of first occurrence in `splitter`.
    pub fn split(&mut self, splitter: &[StateId]) -> Vec<BlockId> {
        let mut hits = vec![0usize; self.blocks.len()];
        let mut touched = Vec::new();
        for &s in splitter {
            let b = self.block_of[s.0];
            if hits[b.0] == 0 {
                touched.push(b);
            }
            hits[b.0] += 1;
        }
        let parents: Vec<BlockId> = touched
            .into_iter()
            .filter(|b| hits[b.0] < self.blocks[b.0].len())
            .collect();
        if parents.is_empty() {
            return parents;
        }

        let mut in_splitter = vec![false; self.states.len()];
        for &s in splitter {
            in_splitter[s.0] = true;
        }
        let mut front: Vec<Vec<StateId>> = vec![Vec::new(); parents.len()];
        let mut slot = vec![usize::MAX; self.blocks.len()];
        for (i, b) in parents.iter().enumerate() {
            slot[b.0] = i;
        }
        for &s in splitter {
            let i = slot[self.block_of[s.0].0];
            if i != usize::MAX {
                front[i].push(s);
            }
        }

        for (&parent, front) in parents.iter().zip(front) {
            let Block { begin, end, .. } = self.blocks[parent.0];
            let rest: Vec<StateId> = self.states[begin..end]
                .iter()
                .copied()
                .filter(|s| !in_splitter[s.0])
                .collect();
            let mid = begin + front.len();
            let fresh = BlockId(self.blocks.len());
            for (offset, s) in front.into_iter().chain(rest).enumerate() {
                let p = begin + offset;
                self.states[p] = s;
                self.position[s.0] = p;
                if p < mid {
                    self.block_of[s.0] = fresh;
                }
            }
            self.blocks.push(Block {
                id: fresh,
                begin,
                end: mid,
                intersection: None,
            });
            let b = &mut self.blocks[parent.0];
            b.begin = mid;
            b.intersection = Some(fresh);
            let at = self
                .order
                .iter()
                .position(|&x| x == parent)
                .expect("split parent is live");
            self.order.insert(at, fresh);
        }
        parents
    }

    pub(crate) fn clear_intersections(&mut self, parents: &[BlockId]) {
        for b in parents {
            self.blocks[b.0].intersection = None;
        }
    }

    /// Checks the structural invariants: contiguous non-empty ranges that
    /// tile the state list and agree with `block_of` and `position`.
    pub fn validate(&self) -> Result<(), String> {
        let mut covered = 0;
        for id in self.blocks_in_state_order() {
            let b = &self.blocks[id.0];
            if b.begin != covered || b.is_empty() {
                return Err(format!("block {id} has range {}..{}", b.begin, b.end));
            }
            for p in b.begin..b.end {
                let s = self.states[p];
                if self.block_of[s.0] != id || self.position[s.0] != p {
                    return Err(format!("state {s} at position {p} is misfiled"));
                }
            }
            if !self.order.contains(&id) {
                return Err(format!("block {id} is missing from the block list"));
            }
            covered = b.end;
        }
        if covered != self.states.len() {
            return Err("blocks do not cover the state list".into());
        }
        let mut seen = vec![false; self.blocks.len()];
        for &id in &self.order {
            if std::mem::replace(&mut seen[id.0], true) {
                return Err(format!("block {id} occurs twice in the block list"));
            }
        }
        if self.blocks_in_state_order().count() != self.order.len() {
            return Err("block list and state list disagree".into());
        }
        Ok(())
    }
}

/// Growable square boolean table indexed by block identifiers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelTable {
    rows: Vec<Vec<bool>>,
}

impl RelTable {
    pub fn new(size: usize) -> Self {
        RelTable {
            rows: vec![vec![false; size]; size],
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn grow(&mut self, size: usize) {
        if size <= self.rows.len() {
            return;
        }
        for row in &mut self.rows {
            row.resize(size, false);
        }
        self.rows.resize(size, vec![false; size]);
    }

    #[inline]
    pub fn get(&self, b: BlockId, c: BlockId) -> bool {
        self.rows[b.0][c.0]
    }

    #[inline]
    pub fn set(&mut self, b: BlockId, c: BlockId, value: bool) {
        self.rows[b.0][c.0] = value;
    }
}

/// A partition together with a relation `⊴` between its blocks, encoded by
/// `rel.get(B, C) == true` iff `B ⊴ C`.
#[derive(Clone, Debug)]
pub struct PartitionRelationPair {
    pub partition: Partition,
    pub rel: RelTable,
}

impl PartitionRelationPair {
    /// `⟨P, id⟩`
    pub fn identity(partition: Partition) -> Self {
        let mut rel = RelTable::new(partition.id_bound());
        for &b in partition.block_list() {
            rel.set(b, b, true);
        }
        PartitionRelationPair { partition, rel }
    }

    /// Builds a pair from explicit blocks and `(i, j)` pairs of block
    /// indices meaning `blocks[i] ⊴ blocks[j]`. Reflexive pairs are added.
    pub fn from_blocks(
        num_states: usize,
        blocks: &[Vec<StateId>],
        leq: &[(usize, usize)],
    ) -> Result<Self, PartitionError> {
        let partition = Partition::from_blocks(num_states, blocks)?;
        let mut pr = PartitionRelationPair::identity(partition);
        for &(i, j) in leq {
            let n = blocks.len();
            if i >= n || j >= n {
                return Err(PartitionError::BlockOutOfRange(i.max(j), n));
            }
            pr.rel.set(BlockId(i), BlockId(j), true);
        }
        Ok(pr)
    }

    #[inline]
    pub fn leq(&self, b: BlockId, c: BlockId) -> bool {
        self.rel.get(b, c)
    }

    /// Blocks `C` with `B ⊴ C`, in block-list order.
    pub fn above(&self, b: BlockId) -> impl Iterator<Item = BlockId> + '_ {
        self.partition
            .block_list()
            .iter()
            .copied()
            .filter(move |&c| self.rel.get(b, c))
    }

    /// `μ(B)`: the union of all blocks `C` with `B ⊴ C`.
    pub fn mu(&self, b: BlockId) -> StateSet {
        self.above(b)
            .flat_map(|c| self.partition.members(c).iter().copied())
            .collect()
    }

    /// `⊴` as a list of block pairs in block-list order, reflexive pairs
    /// included.
    pub fn pairs(&self) -> Vec<(BlockId, BlockId)> {
        let order = self.partition.block_list();
        order
            .iter()
            .flat_map(|&b| order.iter().map(move |&c| (b, c)))
            .filter(|&(b, c)| self.rel.get(b, c))
            .collect()
    }

    pub fn reflexivity_violation(&self) -> Option<BlockId> {
        self.partition
            .block_list()
            .iter()
            .copied()
            .find(|&b| !self.rel.get(b, b))
    }

    /// Blocks `(B, C, D)` with `B ⊴ C ⊴ D` but not `B ⊴ D`.
    pub fn transitivity_violation(&self) -> Option<(BlockId, BlockId, BlockId)> {
        let order = self.partition.block_list();
        for &b in order {
            for &c in order {
                if !self.rel.get(b, c) {
                    continue;
                }
                for &d in order {
                    if self.rel.get(c, d) && !self.rel.get(b, d) {
                        return Some((b, c, d));
                    }
                }
            }
        }
        None
    }

    pub fn is_preorder(&self) -> bool {
        self.reflexivity_violation().is_none() && self.transitivity_violation().is_none()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::kripke::fixtures::ids;

    /// Five pairs of states with `[0,1] ◁ [2,3]`, `[0,1] ◁ [6,7]`,
    /// `[4,5] ◁ [6,7]` and `[8,9] ◁ [6,7]`.
    pub fn p4() -> PartitionRelationPair {
        let blocks: Vec<_> = (0..5).map(|i| ids(&[2 * i, 2 * i + 1])).collect();
        PartitionRelationPair::from_blocks(10, &blocks, &[(0, 1), (0, 3), (2, 3), (4, 3)]).unwrap()
    }
}

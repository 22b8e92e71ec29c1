//! Golden tests on two small hand-built examples: refining a
//! partition-relation pair by a splitter, and splitting an ordered
//! partition.

use std::collections::BTreeSet;

use stsim::engine::EngineState;
use stsim::{KripkeStructure, Label, Partition, PartitionRelationPair, StateId};

type Edges = BTreeSet<(Vec<usize>, Vec<usize>)>;

fn ids(states: &[usize]) -> Vec<StateId> {
    states.iter().map(|&s| StateId(s)).collect()
}

fn edges(engine: &EngineState) -> (BTreeSet<Vec<usize>>, Edges) {
    let pr = engine.pair();
    let members = |b| {
        let mut m: Vec<usize> = pr.partition.members(b).iter().map(|s| s.0).collect();
        m.sort();
        m
    };
    let list = pr.partition.block_list();
    let blocks = list.iter().map(|&b| members(b)).collect();
    let strict = list
        .iter()
        .flat_map(|&b| list.iter().map(move |&c| (b, c)))
        .filter(|&(b, c)| b != c && pr.leq(b, c))
        .map(|(b, c)| (members(b), members(c)))
        .collect();
    (blocks, strict)
}

fn pairs(list: &[(&[usize], &[usize])]) -> Edges {
    list.iter().map(|(b, c)| (b.to_vec(), c.to_vec())).collect()
}

fn report(name: &str, ok: bool) -> bool {
    println!("{}: {name}", if ok { "ok" } else { "FAILED" });
    ok
}

/// Five pairs of states related by `[0,1] ◁ [2,3]`, `[0,1] ◁ [6,7]`,
/// `[4,5] ◁ [6,7]`, `[8,9] ◁ [6,7]`, refined by `{3,4,5,8}`.
fn pair_refinement() -> bool {
    let k = KripkeStructure::new(vec![Label::new(["p"]); 10], []).expect("valid structure");
    let blocks: Vec<_> = (0..5).map(|i| ids(&[2 * i, 2 * i + 1])).collect();
    let pr = PartitionRelationPair::from_blocks(10, &blocks, &[(0, 1), (0, 3), (2, 3), (4, 3)])
        .expect("valid pair");
    let mut engine = EngineState::with_relation(&k, &pr).expect("valid input");
    let s = ids(&[3, 4, 5, 8]);
    let want_blocks: BTreeSet<Vec<usize>> =
        [&[0, 1][..], &[2], &[3], &[4, 5], &[6, 7], &[8], &[9]].iter().map(|b| b.to_vec()).collect();

    engine.splitting_procedure(&s);
    let split = pairs(&[
        (&[0, 1], &[2]),
        (&[0, 1], &[3]),
        (&[2], &[3]),
        (&[3], &[2]),
        (&[0, 1], &[6, 7]),
        (&[4, 5], &[6, 7]),
        (&[8], &[6, 7]),
        (&[9], &[6, 7]),
        (&[8], &[9]),
        (&[9], &[8]),
    ]);
    let ok_split = report(
        "splitting keeps every candidate simulator",
        edges(&engine) == (want_blocks.clone(), split) && engine.check_invariants().is_ok(),
    );

    // Blocks inside the splitter keep only simulators inside it.
    engine.refine(&s);
    let pruned = pairs(&[
        (&[0, 1], &[2]),
        (&[0, 1], &[3]),
        (&[2], &[3]),
        (&[0, 1], &[6, 7]),
        (&[9], &[6, 7]),
        (&[9], &[8]),
    ]);
    let ok_refine = report(
        "pruning restricts blocks inside the splitter to the splitter",
        edges(&engine) == (want_blocks, pruned) && engine.check_invariants().is_ok(),
    );
    ok_split && ok_refine
}

fn ordered_split() -> bool {
    let mut p = Partition::from_blocks(10, &[ids(&[0, 1]), ids(&[2, 3, 4, 5, 6, 7]), ids(&[8, 9])])
        .expect("valid partition");
    p.split(&ids(&[1, 3, 4, 6, 8]));
    let ok = p.state_list() == ids(&[1, 0, 3, 4, 6, 2, 5, 7, 8, 9]).as_slice()
        && p.to_blocks() == vec![ids(&[1]), ids(&[0]), ids(&[3, 4, 6]), ids(&[2, 5, 7]), ids(&[8]), ids(&[9])]
        && p.validate().is_ok();
    report("splitting an ordered partition", ok)
}

pub fn run() -> bool {
    let a = pair_refinement();
    let b = ordered_split();
    a && b
}

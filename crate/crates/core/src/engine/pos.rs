use super::EngineState;
use crate::kripke::StateId;

impl EngineState {
    /// `pos(S, T)` in one backward scan of `S`.
    ///
    /// Members of `S ∩ T` are always included.
    ///
    /// `S` must be a sublist of the state list consisting of equally
    /// labelled states, so that no transition inside `S` goes backward. A
    /// state is in the result iff it is in `T`, has a successor in `T` or a
    /// successor that was already found, and the backward scan visits
    /// successors first. The result keeps the order of `S`.
    pub fn pos_ordered(&mut self, s: &[StateId], t: &[StateId]) -> Vec<StateId> {
        debug_assert!(self.is_forward_closed_list(s));
        for &x in s {
            self.state_mark1[x.0] = true;
        }
        for &y in t {
            if self.state_mark1[y.0] {
                self.state_mark2[y.0] = true;
            }
            for &x in self.k.predecessors(y) {
                if self.state_mark1[x.0] {
                    self.state_mark2[x.0] = true;
                }
            }
        }
        for &y in s.iter().rev() {
            if !self.state_mark2[y.0] {
                continue;
            }
            for &x in self.k.predecessors(y) {
                if self.state_mark1[x.0] {
                    self.state_mark2[x.0] = true;
                }
            }
        }
        let result: Vec<StateId> = s.iter().copied().filter(|x| self.state_mark2[x.0]).collect();
        for &x in s {
            self.state_mark1[x.0] = false;
            self.state_mark2[x.0] = false;
        }
        debug_assert_eq!(
            result.iter().copied().collect::<crate::kripke::StateSet>(),
            crate::reference::pos_naive(&self.k, &s.iter().copied().collect(), &t.iter().copied().collect())
        );
        result
    }

    /// Every transition between two members of `s` goes forward in `s`.
    fn is_forward_closed_list(&self, s: &[StateId]) -> bool {
        let mut at = vec![usize::MAX; self.k.num_states()];
        for (i, &x) in s.iter().enumerate() {
            at[x.0] = i;
        }
        s.iter().enumerate().all(|(i, &x)| {
            self.k
                .successors(x)
                .iter()
                .all(|&y| at[y.0] == usize::MAX || at[y.0] > i || y == x)
        })
    }
}

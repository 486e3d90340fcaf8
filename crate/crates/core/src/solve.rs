//! A small finite-domain constraint solver.
//!
//! Every exhaustive search in the crate (functors, natural families, monads,
//! algebras, lifts) is phrased as a set of variables with finite domains plus
//! propagation rules. Solutions are produced in lexicographic order of the
//! variable values, which is what makes every enumeration canonical.

use std::ops::ControlFlow;

use crate::budget::Budget;
use crate::error::Error;

/// Value of a variable that has not been assigned yet.
pub const UNSET: u32 = u32::MAX;

type RuleFn<'a> = dyn Fn(&[u32], &mut Vec<(usize, u32)>) -> bool + 'a;

/// A constraint problem over `u32`-valued variables.
///
/// A rule is re-run whenever one of its trigger variables is assigned. It sees
/// the whole (partial) assignment, may push forced assignments, and returns
/// `false` on contradiction. Rules must tolerate unassigned inputs.
pub struct Problem<'a> {
    domains: Vec<Vec<u32>>,
    rules: Vec<Box<RuleFn<'a>>>,
    watch: Vec<Vec<usize>>,
    eager: Vec<usize>,
}

struct State {
    assign: Vec<u32>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    out: Vec<(usize, u32)>,
}

impl Default for Problem<'_> {
    fn default() -> Self {
        Self::new()
    }
}

impl<'a> Problem<'a> {
    pub fn new() -> Self {
        Self {
            domains: Vec::new(),
            rules: Vec::new(),
            watch: Vec::new(),
            eager: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    /// Adds a variable; the domain is sorted and deduplicated.
    pub fn var(&mut self, mut domain: Vec<u32>) -> usize {
        domain.sort_unstable();
        domain.dedup();
        self.domains.push(domain);
        self.watch.push(Vec::new());
        self.domains.len() - 1
    }

    pub fn domain(&self, v: usize) -> &[u32] {
        &self.domains[v]
    }

    /// General rule. Rules without triggers run once before the search.
    pub fn rule(
        &mut self,
        triggers: &[usize],
        f: impl Fn(&[u32], &mut Vec<(usize, u32)>) -> bool + 'a,
    ) {
        let id = self.rules.len();
        self.rules.push(Box::new(f));
        if triggers.is_empty() {
            self.eager.push(id);
        }
        for &t in triggers {
            if !self.watch[t].contains(&id) {
                self.watch[t].push(id);
            }
        }
    }

    /// `to` is determined by `from`; `None` means the value of `from` is infeasible.
    pub fn derive(&mut self, from: usize, to: usize, f: impl Fn(u32) -> Option<u32> + 'a) {
        self.rule(&[from], move |a, out| {
            let x = a[from];
            if x == UNSET {
                return true;
            }
            match f(x) {
                Some(y) => {
                    out.push((to, y));
                    true
                }
                None => false,
            }
        });
    }

    /// A predicate evaluated once every variable in `vars` is assigned.
    pub fn check(&mut self, vars: &[usize], f: impl Fn(&[u32]) -> bool + 'a) {
        let owned = vars.to_vec();
        self.rule(vars, move |a, _| owned.iter().any(|&v| a[v] == UNSET) || f(a));
    }

    /// Forces a variable to a value before the search starts.
    pub fn fix(&mut self, v: usize, value: u32) {
        self.rule(&[], move |_, out| {
            out.push((v, value));
            true
        });
    }

    fn set(&self, st: &mut State, v: usize, x: u32) -> bool {
        let cur = st.assign[v];
        if cur != UNSET {
            return cur == x;
        }
        if self.domains[v].binary_search(&x).is_err() {
            return false;
        }
        st.assign[v] = x;
        st.trail.push(v);
        st.queue.push(v);
        true
    }

    fn fire(&self, st: &mut State, r: usize) -> bool {
        let mut out = std::mem::take(&mut st.out);
        out.clear();
        let mut ok = (self.rules[r])(&st.assign, &mut out);
        if ok {
            for &(v, x) in &out {
                if !self.set(st, v, x) {
                    ok = false;
                    break;
                }
            }
        }
        st.out = out;
        ok
    }

    fn propagate(&self, st: &mut State) -> bool {
        while let Some(v) = st.queue.pop() {
            for i in 0..self.watch[v].len() {
                let r = self.watch[v][i];
                if !self.fire(st, r) {
                    st.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    fn undo(&self, st: &mut State, mark: usize) {
        while st.trail.len() > mark {
            let v = st.trail.pop().unwrap();
            st.assign[v] = UNSET;
        }
    }

    fn dfs(
        &self,
        st: &mut State,
        from: usize,
        budget: &Budget,
        visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, Error> {
        budget.charge(1)?;
        let n = self.domains.len();
        let mut v = from;
        while v < n && st.assign[v] != UNSET {
            v += 1;
        }
        if v == n {
            return Ok(visit(&st.assign));
        }
        for i in 0..self.domains[v].len() {
            let x = self.domains[v][i];
            let mark = st.trail.len();
            if self.set(st, v, x) && self.propagate(st)
                && self.dfs(st, v + 1, budget, visit)?.is_break() {
                    self.undo(st, mark);
                    return Ok(ControlFlow::Break(()));
                }
            self.undo(st, mark);
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Visits every solution in lexicographic order until `visit` breaks.
    pub fn solve(
        &self,
        budget: &Budget,
        mut visit: impl FnMut(&[u32]) -> ControlFlow<()>,
    ) -> Result<(), Error> {
        let mut st = State {
            assign: vec![UNSET; self.domains.len()],
            trail: Vec::new(),
            queue: Vec::new(),
            out: Vec::new(),
        };
        for &r in &self.eager {
            if !self.fire(&mut st, r) {
                return Ok(());
            }
        }
        if !self.propagate(&mut st) {
            return Ok(());
        }
        let _ = self.dfs(&mut st, 0, budget, &mut visit)?;
        Ok(())
    }

    pub fn all(&self, budget: &Budget) -> Result<Vec<Vec<u32>>, Error> {
        let mut out = Vec::new();
        self.solve(budget, |a| {
            out.push(a.to_vec());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Number of solutions, stopping early once `cap` is reached.
    pub fn count(&self, budget: &Budget, cap: usize) -> Result<usize, Error> {
        let mut n = 0;
        if cap == 0 {
            return Ok(0);
        }
        self.solve(budget, |_| {
            n += 1;
            if n >= cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(n)
    }

    pub fn first(&self, budget: &Budget) -> Result<Option<Vec<u32>>, Error> {
        let mut found = None;
        self.solve(budget, |a| {
            found = Some(a.to_vec());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order_and_pruning() {
        let mut p = Problem::new();
        let a = p.var(vec![0, 1, 2]);
        let b = p.var(vec![0, 1, 2]);
        p.check(&[a, b], move |s| s[a] < s[b]);
        let sols = p.all(&Budget::unlimited()).unwrap();
        assert_eq!(sols, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn derived_values_respect_domains() {
        let mut p = Problem::new();
        let a = p.var(vec![0, 1, 2, 3]);
        let b = p.var(vec![0, 2, 4]);
        p.derive(a, b, |x| Some(x + 1));
        let sols = p.all(&Budget::unlimited()).unwrap();
        assert_eq!(sols, vec![vec![1, 2], vec![3, 4]]);
    }

    #[test]
    fn backward_derivation_is_consistent() {
        // b is branched before it can be derived from c.
        let mut p = Problem::new();
        let a = p.var(vec![0, 1]);
        let b = p.var(vec![0, 1]);
        let c = p.var(vec![0, 1]);
        p.derive(a, c, Some);
        p.derive(c, b, |x| Some(1 - x));
        assert_eq!(
            p.all(&Budget::unlimited()).unwrap(),
            vec![vec![0, 1, 0], vec![1, 0, 1]]
        );
    }

    #[test]
    fn count_caps_and_budget() {
        let mut p = Problem::new();
        for _ in 0..10 {
            p.var(vec![0, 1]);
        }
        assert_eq!(p.count(&Budget::unlimited(), 5).unwrap(), 5);
        assert_eq!(p.count(&Budget::unlimited(), usize::MAX).unwrap(), 1024);
        assert!(matches!(
            p.count(&Budget::new(100), usize::MAX),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn fixed_contradiction_has_no_solutions() {
        let mut p = Problem::new();
        let a = p.var(vec![0, 1]);
        p.fix(a, 2);
        assert!(p.all(&Budget::unlimited()).unwrap().is_empty());
        let mut q = Problem::new();
        q.var(vec![]);
        assert!(q.first(&Budget::unlimited()).unwrap().is_none());
    }
}

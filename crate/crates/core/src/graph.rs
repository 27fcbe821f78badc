//! Strongly connected components of explicit graphs.

/// Result of an SCC decomposition.
#[derive(Clone, Debug)]
pub struct Sccs {
    /// SCC index of every vertex.
    pub scc_of: Vec<usize>,
    /// Members of every SCC, in increasing vertex order.
    pub members: Vec<Vec<usize>>,
    /// SCC indices in a topological order of the condensation: every edge
    /// between distinct SCCs goes from an earlier to a later entry.
    pub topo_order: Vec<usize>,
}

impl Sccs {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Iterative Tarjan over vertices `0..n`. `succ(v)` lists the successors of `v`.
///
/// SCCs are numbered in the order Tarjan completes them, which is a reverse
/// topological order; `topo_order` is its reversal.
pub fn tarjan<F, I>(n: usize, mut succ: F) -> Sccs
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut scc_of = vec![UNVISITED; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0;
    // (vertex, successor list, next successor position)
    let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, succ(root).into_iter().collect(), 0));

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let ws = succ(w).into_iter().collect();
                    call.push((w, ws, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let id = members.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        scc_of[w] = id;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    members.push(comp);
                }
            }
        }
    }
    let topo_order = (0..members.len()).rev().collect();
    Sccs {
        scc_of,
        members,
        topo_order,
    }
}

/// Vertices reachable from `starts` (including them).
pub fn reachable<F, I>(n: usize, starts: impl IntoIterator<Item = usize>, mut succ: F) -> Vec<bool>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; n];
    let mut work: Vec<usize> = Vec::new();
    for s in starts {
        if !seen[s] {
            seen[s] = true;
            work.push(s);
        }
    }
    while let Some(v) = work.pop() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                work.push(w);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_and_a_bridge() {
        // 0 <-> 1 -> 2 <-> 3, 4 isolated
        let adj = [vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let s = tarjan(5, |v| adj[v].clone());
        assert_eq!(s.len(), 3);
        assert_eq!(s.scc_of[0], s.scc_of[1]);
        assert_eq!(s.scc_of[2], s.scc_of[3]);
        let pos = |c: usize| s.topo_order.iter().position(|x| *x == c).unwrap();
        assert!(pos(s.scc_of[0]) < pos(s.scc_of[2]));
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000;
        let s = tarjan(n, |v| if v + 1 < n { vec![v + 1] } else { vec![] });
        assert_eq!(s.len(), n);
        assert_eq!(s.scc_of[0], s.topo_order[0]);
    }
}

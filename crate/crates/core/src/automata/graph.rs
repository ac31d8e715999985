//! Plain graph utilities over adjacency lists.

use std::collections::VecDeque;

/// Nodes reachable from `seeds`.
pub fn reachable(adj: &[Vec<usize>], seeds: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = Vec::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(q) = stack.pop() {
        for &t in &adj[q] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Strongly connected components (iterative Tarjan), in reverse topological order.
pub fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, i)) = call.last() {
            if i < adj[v].len() {
                let w = adj[v][i];
                call.last_mut().expect("frame").1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Component id per node.
pub fn scc_ids(adj: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let comps = tarjan(adj);
    let mut id = vec![0; adj.len()];
    for (c, comp) in comps.iter().enumerate() {
        for &q in comp {
            id[q] = c;
        }
    }
    (id, comps)
}

/// Shortest path (as a node sequence including both ends) from `from` to any node satisfying
/// `goal`, restricted to nodes satisfying `allowed`. A path of length zero is returned when
/// `from` itself is a goal and `nonempty` is false.
pub fn bfs_path(
    adj: &[Vec<usize>],
    from: usize,
    goal: &dyn Fn(usize) -> bool,
    allowed: &dyn Fn(usize) -> bool,
    nonempty: bool,
) -> Option<Vec<usize>> {
    if !nonempty && goal(from) {
        return Some(vec![from]);
    }
    let mut parent = vec![usize::MAX; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    // Seed with successors so that a nonempty path back to `from` can be found.
    for &t in &adj[from] {
        if allowed(t) && !seen[t] {
            seen[t] = true;
            parent[t] = from;
            queue.push_back(t);
        }
    }
    while let Some(q) = queue.pop_front() {
        if goal(q) {
            let mut path = vec![q];
            let mut cur = q;
            loop {
                let p = parent[cur];
                path.push(p);
                if p == from {
                    break;
                }
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &t in &adj[q] {
            if allowed(t) && !seen[t] {
                seen[t] = true;
                parent[t] = q;
                queue.push_back(t);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sccs_and_paths() {
        let adj = vec![vec![1], vec![2], vec![1, 3], vec![]];
        let comps = tarjan(&adj);
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().any(|c| c.len() == 2));
        let p = bfs_path(&adj, 1, &|q| q == 1, &|_| true, true).unwrap();
        assert_eq!(p, vec![1, 2, 1]);
        let p = bfs_path(&adj, 0, &|q| q == 3, &|_| true, false).unwrap();
        assert_eq!(p, vec![0, 1, 2, 3]);
        assert!(bfs_path(&adj, 3, &|q| q == 0, &|_| true, false).is_none());
    }
}

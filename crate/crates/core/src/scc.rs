//! Iterative Tarjan strongly-connected components.

/// Component assignment. Components are numbered in completion order, so for
/// every edge `u -> v` crossing components, `comp[v] < comp[u]`.
#[derive(Debug, Clone)]
pub(crate) struct Components {
    pub comp: Vec<u32>,
    pub count: usize,
}

pub(crate) fn tarjan<F, I>(n: usize, succ: F) -> Components
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0u32;
    let mut count = 0usize;
    // (node, pending successors)
    let mut call: Vec<(usize, I)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, succ(root)));

        while let Some((v, iter)) = call.last_mut() {
            let v = *v;
            if let Some(w) = iter.next() {
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, succ(w)));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some((parent, _)) = call.last() {
                let p = *parent;
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = count as u32;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    Components { comp, count }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: usize, edges: &[(usize, usize)]) -> Components {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
        }
        tarjan(n, |v| adj[v].clone().into_iter())
    }

    #[test]
    fn cycle_collapses() {
        let c = run(4, &[(0, 1), (1, 0), (1, 2), (2, 3)]);
        assert_eq!(c.count, 3);
        assert_eq!(c.comp[0], c.comp[1]);
        assert!(c.comp[2] < c.comp[1]);
        assert!(c.comp[3] < c.comp[2]);
    }

    #[test]
    fn self_loop_is_singleton() {
        let c = run(2, &[(0, 0), (0, 1)]);
        assert_eq!(c.count, 2);
    }
}

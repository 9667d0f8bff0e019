use super::{Dag, GraphError, VertexSet};

/// `true` iff `x` and `y` are d-separated by `given` in `dag`.
///
/// Runs the reachable-set (Bayes-ball) traversal over `(vertex, direction)`
/// states, so the cost is linear in the number of edges.
pub fn d_separated(dag: &Dag, x: usize, y: usize, given: &VertexSet) -> Result<bool, GraphError> {
    d_separated_by(dag, x, y, &given.to_vec())
}

/// [`d_separated`] with the conditioning set given as a slice.
pub fn d_separated_by(dag: &Dag, x: usize, y: usize, given: &[usize]) -> Result<bool, GraphError> {
    let n = dag.n_vertices();
    for &v in [x, y].iter().chain(given) {
        if v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n });
        }
    }
    if x == y {
        return Err(GraphError::InvalidQuery(format!("d-separation of {x} from itself")));
    }
    if given.contains(&x) || given.contains(&y) {
        return Err(GraphError::InvalidQuery(format!(
            "conditioning set contains an endpoint of ({x}, {y})"
        )));
    }
    Ok(!reaches(dag, x, y, given))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    // arrived from a child, moving against edge direction
    Up,
    // arrived from a parent
    Down,
}

/// Whether an active trail given `given` connects `source` to `target`.
fn reaches(dag: &Dag, source: usize, target: usize, given: &[usize]) -> bool {
    let n = dag.n_vertices();
    let mut observed = vec![false; n];
    for &g in given {
        observed[g] = true;
    }
    // colliders are open when they are in `given` or have a descendant in it
    let mut open = vec![false; n];
    let mut stack: Vec<usize> = given.to_vec();
    while let Some(v) = stack.pop() {
        if !open[v] {
            open[v] = true;
            stack.extend(dag.parents(v).iter().copied().filter(|&p| !open[p]));
        }
    }
    let mut visited = vec![[false; 2]; n];
    let mut queue = vec![(source, Dir::Up)];
    while let Some((v, dir)) = queue.pop() {
        let slot = &mut visited[v][dir as usize];
        if *slot {
            continue;
        }
        *slot = true;
        if v == target {
            return true;
        }
        match dir {
            Dir::Up if !observed[v] => {
                queue.extend(dag.parents(v).iter().map(|&p| (p, Dir::Up)));
                queue.extend(dag.children(v).iter().map(|&c| (c, Dir::Down)));
            }
            Dir::Up => {}
            Dir::Down => {
                if !observed[v] {
                    queue.extend(dag.children(v).iter().map(|&c| (c, Dir::Down)));
                }
                if open[v] {
                    queue.extend(dag.parents(v).iter().map(|&p| (p, Dir::Up)));
                }
            }
        }
    }
    false
}

use crate::graph::{d_separated_by, Dag};

use super::{CiError, CiTester, TestCounter};

/// Perfect CI tests read off a known DAG by d-separation.
#[derive(Debug)]
pub struct OracleTester {
    dag: Dag,
    counter: TestCounter,
}

impl OracleTester {
    pub fn new(dag: Dag) -> Self {
        Self {
            dag,
            counter: TestCounter::new(),
        }
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }
}

impl CiTester for OracleTester {
    fn n_vertices(&self) -> usize {
        self.dag.n_vertices()
    }

    fn counter(&self) -> &TestCounter {
        &self.counter
    }

    fn evaluate(&self, x: usize, y: usize, s: &[usize]) -> Result<bool, CiError> {
        Ok(d_separated_by(&self.dag, x, y, s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_verdicts_and_counting() {
        let t = OracleTester::new(Dag::new(3, [(0, 1), (1, 2)]).unwrap());
        assert!(t.independent(0, 2, &[1]).unwrap());
        assert!(!t.independent(0, 2, &[]).unwrap());
        assert!(t.independent(2, 0, &[1]).unwrap());
        let c = t.counter().snapshot();
        assert_eq!((c.at_order(0), c.at_order(1)), (1, 2));
    }

    #[test]
    fn conflicting_vstructure_endpoints_are_marginally_dependent() {
        // U=0, A=1, B=2, C=3, D=4, V=5
        let dag = Dag::new(6, [(0, 1), (3, 1), (4, 1), (3, 2), (4, 2), (5, 2)]).unwrap();
        let t = OracleTester::new(dag);
        assert!(!t.independent(1, 2, &[]).unwrap());
    }

    #[test]
    fn invalid_queries_are_rejected() {
        let t = OracleTester::new(Dag::new(3, [(0, 1)]).unwrap());
        assert!(t.independent(0, 0, &[]).is_err());
        assert!(t.independent(0, 1, &[1]).is_err());
        assert!(t.independent(0, 1, &[2, 2]).is_err());
        assert!(t.independent(0, 7, &[]).is_err());
    }
}

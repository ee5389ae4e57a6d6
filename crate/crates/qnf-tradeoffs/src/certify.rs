use qnf_core::{par, NetworkConfig, Rational};

/// One probe of an equivalence certificate: `x,before,after,equal`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivRow {
    pub x: Vec<Rational>,
    pub before: Vec<Rational>,
    pub after: Vec<Rational>,
}

impl EquivRow {
    pub fn equal(&self) -> bool {
        self.before == self.after
    }
}

/// Evaluates both nets exactly at every probe.
pub fn certify_equivalence(before: &NetworkConfig, after: &NetworkConfig, probes: &[Vec<Rational>]) -> Vec<EquivRow> {
    let (k1, k2) = (before.compile(), after.compile());
    par::map(probes, |x| EquivRow {
        x: x.clone(),
        before: k1.eval(x).expect("probe dimension matches"),
        after: k2.eval(x).expect("probe dimension matches"),
    })
}

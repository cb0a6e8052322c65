//! LP model text in the `lp_solve` dialect:
//!
//! ```text
//! min: 47x1+17x2+11x3+2x4;
//! x1+x3<=26;
//! x2+x4<=839;
//! x1+x2=97;
//! x3+x4=78;
//! ```
//!
//! Variables are the 1-based flat edge ordinals. Dead edges are left out of
//! every line; pins become `xk>=w;` rows after the consumer rows.

use std::fmt::Write;

use super::PinSet;
use crate::model::{EdgeId, ProblemInstance};

fn vars(instance: &ProblemInstance, edges: impl Iterator<Item = EdgeId>) -> String {
    edges
        .map(|e| format!("x{}", e.flat(instance.num_producers())))
        .collect::<Vec<_>>()
        .join("+")
}

/// Renders the offline model. Numbers use Rust's shortest round-trip
/// formatting, so integers have no decimal point.
pub fn export_lp(instance: &ProblemInstance, demands: &[f64], alive: &[bool], pins: &PinSet) -> String {
    let n = instance.num_consumers();
    let m = instance.num_producers();
    let is_alive = |e: EdgeId| alive[instance.index(e)];
    let mut out = String::new();

    let objective = instance
        .edges()
        .filter(|&e| is_alive(e))
        .map(|e| format!("{}x{}", instance.distance(e), e.flat(m)))
        .collect::<Vec<_>>()
        .join("+");
    writeln!(out, "min: {objective};").unwrap();

    for j in 0..m {
        let lhs = vars(instance, (0..n).map(|i| EdgeId::new(i, j)).filter(|&e| is_alive(e)));
        // a producer with no live edges constrains nothing
        if !lhs.is_empty() {
            writeln!(out, "{lhs}<={};", instance.capacity(j)).unwrap();
        }
    }
    for (i, r) in demands.iter().enumerate() {
        let lhs = vars(instance, (0..m).map(|j| EdgeId::new(i, j)).filter(|&e| is_alive(e)));
        let lhs = if lhs.is_empty() { "0".to_string() } else { lhs };
        writeln!(out, "{lhs}={r};").unwrap();
    }
    for (e, w) in pins.sorted() {
        writeln!(out, "x{}>={w};", e.flat(m)).unwrap();
    }
    out
}

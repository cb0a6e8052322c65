//! Write the offline problem as an LP model for an external solver, with and
//! without a failed edge and a pinned weight.

use edge_alloc::model::{EdgeId, ProblemInstance};
use edge_alloc::solver::{export_lp, PinSet};

fn main() {
    let instance = ProblemInstance::new(2, 2, vec![47.0, 17.0, 11.0, 2.0], vec![26.0, 839.0]).unwrap();
    let demands = [97.0, 78.0];

    print!("{}", export_lp(&instance, &demands, &[true; 4], &PinSet::new()));
    println!();

    // edge 3 (c2, p1) failed, 40 units must stay on (c1, p2)
    let mut pins = PinSet::new();
    pins.pin(EdgeId::new(0, 1), 40.0);
    print!("{}", export_lp(&instance, &demands, &[true, true, false, true], &pins));
}

//! A toy configuration database and its decrement tree, expanded by hand.

use cartwheel_core::axle::{Axle, Bounds, Degree};

pub const TOY_DATABASE: &str = "\
# an edge of two degree-7 vertices, then single vertices
config e77 2
v 1 7 : 2
v 2 7 : 1
end
config v8 1
v 1 8 :
end
config v6 1
v 1 6 :
end
config v5 1
v 1 5 :
end
";

/// Degree 9, spokes 1 and 2 in 5..7 and the hat between them in 7..8.
pub fn toy_start() -> Axle {
    Axle::trivial(Degree::new(9).unwrap())
        .with_bounds(1, Bounds::new(5, 7))
        .with_bounds(2, Bounds::new(5, 7))
        .with_bounds(10, Bounds::new(7, 8))
}

/// Every event of the loop from [`toy_start`], 11 pops in all.
pub const HAND_EXPANDED: [&str; 32] = [
    "pop 0 1:5-7,2:5-7,10:7-8",
    "found e77 at 1 2",
    "push 1 6",
    "push 2 6",
    // spoke 2 lowered first: the stack is last in, first out
    "pop 1 1:5-7,2:5-6,10:7-8",
    "found v8 at 10",
    "push 10 7",
    "pop 2 1:5-7,2:5-6,10:7-7",
    "found e77 at 1 10",
    "push 1 6",
    "pop 3 1:5-6,2:5-6,10:7-7",
    "found v6 at 1",
    "push 1 5",
    "pop 4 1:5-5,2:5-6,10:7-7",
    "found v6 at 2",
    "push 2 5",
    "pop 5 1:5-5,2:5-5,10:7-7",
    "found v5 at 1",
    "pop 1 1:5-6,2:5-7,10:7-8",
    "found v8 at 10",
    "push 10 7",
    "pop 2 1:5-6,2:5-7,10:7-7",
    "found e77 at 2 10",
    "push 2 6",
    "pop 3 1:5-6,2:5-6,10:7-7",
    "found v6 at 1",
    "push 1 5",
    "pop 4 1:5-5,2:5-6,10:7-7",
    "found v6 at 2",
    "push 2 5",
    "pop 5 1:5-5,2:5-5,10:7-7",
    "found v5 at 1",
];

//! Hand-written machines of the bit-transmission protocol, used as references by tests, the
//! acceptance harness and the CLI.

use crate::machine::MooreMachine;

fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Sender over `in`: raises `c` until it has read `in`, then lowers it and raises `t` for good.
pub fn sender() -> MooreMachine {
    // states: 0 start (c), 1 saw ¬in (c), 2 saw in (¬c, t)
    MooreMachine::new(s(&["in"]), s(&["c", "t_b"]), 0, vec![0b01, 0b01, 0b10], vec![vec![1, 2], vec![1, 1], vec![2, 2]]).unwrap()
}

/// Receiver hyper implementation over `in, t`.
pub fn hyper_receiver() -> MooreMachine {
    // inputs: bit0 in, bit1 t; states: 0 start, 1 ¬in, 2 in waiting for t, 3 out
    MooreMachine::new(
        s(&["in", "t_b"]),
        s(&["out"]),
        0,
        vec![0, 0, 0, 1],
        vec![vec![1, 2, 1, 3], vec![1; 4], vec![2, 2, 3, 3], vec![3; 4]],
    )
    .unwrap()
}

/// Local receiver over `c` with a delay state: skips the first letter, then waits one more step
/// after seeing `¬c` before raising `out`.
pub fn local_receiver_delayed() -> MooreMachine {
    // states b0..b4
    MooreMachine::new(s(&["c"]), s(&["out"]), 0, vec![0, 0, 0, 0, 1], vec![vec![1, 1], vec![3, 2], vec![2, 2], vec![4, 4], vec![4, 4]]).unwrap()
}

/// The delayed local receiver without the extra waiting state: raises `out` right after seeing `¬c`
/// at the second position.
pub fn local_receiver() -> MooreMachine {
    MooreMachine::new(s(&["c"]), s(&["out"]), 0, vec![0, 0, 0, 1], vec![vec![1, 1], vec![3, 2], vec![2, 2], vec![3, 3]]).unwrap()
}

/// Receiver of the component specification over class tokens `ic0, ic1`.
pub fn class_receiver() -> MooreMachine {
    // letters: bit0 ic0, bit1 ic1; both tokens at once are treated like ic0
    MooreMachine::new(s(&["ic0", "ic1"]), s(&["out"]), 0, vec![0, 1, 0], vec![vec![0, 1, 2, 1], vec![1; 4], vec![2; 4]]).unwrap()
}

/// The composed system over `in` with outputs `c, out` (five states).
pub fn composed() -> MooreMachine {
    // 0 start (c), 1 ¬in (c), 2 in (¬c), 3 ¬in settled (c), 4 in settled (¬c, out)
    MooreMachine::new(
        s(&["in"]),
        s(&["c", "out"]),
        0,
        vec![0b01, 0b01, 0b00, 0b01, 0b10],
        vec![vec![1, 2], vec![3, 3], vec![4, 4], vec![3, 3], vec![4, 4]],
    )
    .unwrap()
}

//! Every example runs to completion.

#[path = "../examples/dynamics.rs"]
mod dynamics;

#[test]
fn dynamics_example() {
    dynamics::main();
}

#[path = "../examples/rays.rs"]
mod rays;

#[test]
fn rays_example() {
    rays::main();
}

#[path = "../examples/puzzle.rs"]
mod puzzle;

#[test]
fn puzzle_example() {
    puzzle::main();
}

#[path = "../examples/tableau.rs"]
mod tableau;

#[test]
fn tableau_example() {
    tableau::main();
}

#[path = "../examples/synthetic_nest.rs"]
mod synthetic_nest;

#[test]
fn synthetic_nest_example() {
    synthetic_nest::main();
}

#[path = "../examples/geometric_nest.rs"]
mod geometric_nest;

#[test]
fn geometric_nest_example() {
    geometric_nest::main();
}

#[path = "../examples/modulus.rs"]
mod modulus;

#[test]
fn modulus_example() {
    modulus::main();
}


#[test]
fn cli_example() {
    cli::main();
}

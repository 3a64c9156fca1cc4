//! Client-side masking on a generated instance: key generation, the masked
//! problem, the feasibility correspondence and the objective relation.
//!
//! ```bash
//! cargo run -p lpmask --example masking_roundtrip
//! ```

use lpmask::audit::{generate_instance_with_witness, BMode};
use lpmask::masking::{decrypt_solution, encrypt, keygen, verify_feasibility_map};
use lpmask::model::masked_as_general;
use lpmask::model::peculiar_as_general;
use lpmask::simplex::solve_general;

fn main() {
    let g = generate_instance_with_witness(2, 3, 7, BMode::RandomB).unwrap();
    let p = &g.problem;
    println!(
        "client: A = {}, b = {}, B = {}, c = {}",
        p.a(),
        p.b(),
        p.ineq(),
        p.c()
    );

    let key = keygen(p, 42).unwrap();
    println!(
        "key:    Q = {}, M = {}, P = {}, r = {}, gamma = {}",
        key.row_mix(),
        key.col_mix(),
        key.correction(),
        key.shift(),
        key.scale()
    );
    let masked = encrypt(p, &key).unwrap();
    println!(
        "masked: A' = {}, b' = {}, B' = {}, c' = {}",
        masked.a(),
        masked.b(),
        masked.ineq(),
        masked.c()
    );

    let pair = verify_feasibility_map(p, &key, &g.witness).unwrap();
    println!(
        "witness x0 = {} -> y = {}; feasible (client, masked) = ({}, {})",
        g.witness, pair.y, pair.original, pair.masked
    );
    let lhs = masked.c().dot(&pair.y).unwrap();
    let rhs = key.scale() * (p.c().dot(&g.witness).unwrap() + p.c().dot(key.shift()).unwrap());
    println!("c'^T y = {lhs}, gamma (c^T x + c^T r) = {rhs}");

    // Without sign restrictions the two problems correspond exactly.
    let client = solve_general(&peculiar_as_general(p, false));
    let server = solve_general(&masked_as_general(&masked, false));
    println!(
        "free-sign client: {}",
        lpmask::io::describe_outcome(&client)
    );
    println!(
        "free-sign masked: {}",
        lpmask::io::describe_outcome(&server)
    );
    if let Some(y) = server.x_opt() {
        let (x, v) = decrypt_solution(y, p, &key).unwrap();
        println!("decrypted masked optimum: x = {x}, value {v}");
    }
}

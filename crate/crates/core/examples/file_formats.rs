//! Canonical JSON documents: problems, keys and solutions, with the
//! encrypt / solve / decrypt flow done through files in a temp directory.
//!
//! ```bash
//! cargo run -p lpmask --example file_formats
//! ```

use lpmask::audit::{generate_instance, BMode};
use lpmask::io::{from_json, to_canonical, KeyFile, ProblemDoc, SolutionFile};
use lpmask::masking::{decrypt_solution, encrypt, keygen};
use lpmask::simplex::solve_nonneg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("lpmask-file-formats");
    std::fs::create_dir_all(&dir)?;

    let p = generate_instance(1, 3, 5, BMode::IdentityB)?;
    let problem_text = ProblemDoc::Peculiar(p.clone()).to_text();
    std::fs::write(dir.join("problem.json"), &problem_text)?;
    print!("problem.json:\n{problem_text}");

    let key = keygen(&p, 9)?;
    let key_text = to_canonical(&KeyFile::new(&key, &p, Some(9)));
    std::fs::write(dir.join("key.json"), &key_text)?;

    let masked = ProblemDoc::Masked(encrypt(&p, &key)?);
    std::fs::write(dir.join("masked.json"), masked.to_text())?;

    // Server side: only the masked file is needed.
    let served = ProblemDoc::from_text(&std::fs::read_to_string(dir.join("masked.json"))?)?;
    let outcome = solve_nonneg(&served.as_general(true))?;
    let solution = to_canonical(&SolutionFile::new(&outcome, p.n()));
    print!("solution.json:\n{solution}");

    // Client side: reload key against the problem and decrypt.
    let key_file: KeyFile = from_json(&std::fs::read_to_string(dir.join("key.json"))?)?;
    let key = key_file.load_for(&p)?;
    let sol: SolutionFile = from_json(&solution)?;
    if let Some(y) = sol.to_outcome()?.x_opt() {
        let (x, value) = decrypt_solution(y, &p, &key)?;
        println!("recovered x = {x}, value {value}");
    } else {
        println!("server verdict: {}", sol.outcome.verdict);
    }
    Ok(())
}

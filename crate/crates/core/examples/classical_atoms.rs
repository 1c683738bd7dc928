//! Classical p-atoms measured against the shells of the auxiliary function m(x): support,
//! size, radius and moment conditions.

use hermite_hardy::atoms::{odd_bump_atom, shell_index, validate_classical_atom, ShellConfig};

pub fn run_example() -> anyhow::Result<Vec<bool>> {
    let shells = ShellConfig::default();
    let mut out = Vec::new();
    for (c, r) in [(2.0, 0.5), (5.0, 0.125), (10.0, 0.0625)] {
        let atom = odd_bump_atom(c, r, 1.0, 4)?;
        let v = validate_classical_atom(&atom, &shells, 1)?;
        println!("x0 = {c:4}, r = {r:6}: shell {:?}, conditions hold: {}", shell_index(&[c], &shells), v.pass);
        out.push(v.pass);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example().map(drop)
}

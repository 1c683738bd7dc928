//! Build an extremal (p, L, M)-atom `a = L^M b`, write its JSON document, read it back
//! and validate the three atom conditions.

use hermite_hardy::atoms::{make_plm_atom, min_atom_order, validate_plm_atom, PlmAtom, PlmAtomParams};

pub fn run_example() -> anyhow::Result<(String, bool)> {
    let (n, p) = (2, 0.5);
    let m = min_atom_order(n, p);
    let atom = make_plm_atom(&PlmAtomParams::new(p, m, vec![1.0, -0.5], 0.25))?;
    let doc = serde_json::to_string_pretty(&atom.to_doc())?;
    println!("{doc}");

    let back = PlmAtom::from_doc(&serde_json::from_str(&doc)?)?;
    let v = validate_plm_atom(&back, 7)?;
    println!("M = {m}, worst size ratio = {:.12}, representation error = {:e}", v.worst_size_ratio, v.representation.measured);
    println!("atom conditions hold: {}", v.pass);
    Ok((doc, v.pass))
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example().map(drop)
}

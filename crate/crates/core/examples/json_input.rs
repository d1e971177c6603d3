//! Reading a complex and a character from JSON, as the `mn-betti` subcommand
//! does.

use novikov::io::{complex_to_json, parse_cochain, parse_complex};
use novikov::{Rational, TwistedComplex};

fn main() -> novikov::Result<()> {
  let k = parse_complex(r#"{"vertices": 4, "simplices": [[0,1,2],[0,2,3]]}"#)?;
  println!("complex {}", complex_to_json(&k));
  // Weight 3 on every edge out of vertex 0, 1 elsewhere. On a disk every
  // character is a coboundary, so the result is the untwisted (1, 0, 0).
  let w = parse_cochain::<Rational>(&k, r#"{"degree": 1, "values": {"0,1": "3", "0,2": "3", "0,3": "3"}}"#, Rational::from_integer(1.into()))?;
  let b = TwistedComplex::assemble(&k, w)?.betti();
  println!("betti {:?}  euler {}", b.betti, b.euler);
  Ok(())
}

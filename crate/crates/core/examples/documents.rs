//! Parses a complex document, prints its canonical form and parses that back.

use cat0_collapse::io::emit_document;
use cat0_collapse::parse_complex;

const DOC: &str = r#"{
  "format_version": "1",
  "vertices": ["a", "b", "c", "d", "e"],
  "maximal_simplices": [["a", "b", "c", "d"], ["b", "c", "d", "e"]],
  "edge_lengths": {
    "a,b": 1.0, "a,c": 1.0, "a,d": 1.0, "b,c": 1.0, "b,d": 1.0,
    "c,d": 1.0, "b,e": 1.1, "c,e": 0.95, "d,e": 1.05
  }
}"#;

fn main() -> cat0_collapse::Result<()> {
    let (k, m) = parse_complex(DOC)?;
    let canonical = emit_document(&k, &m, None);
    print!("{canonical}");
    let (k2, m2) = parse_complex(&canonical)?;
    println!("round trip exact: {}", k2 == k && m2 == m && emit_document(&k2, &m2, None) == canonical);
    Ok(())
}

//! Writing, reading and drawing a level document.

use std::collections::BTreeMap;

use chamber::compile::compile_3sat_turrets;
use chamber::format::{digest, write_dimacs, LevelDocument, Provenance, SourceProblem};
use chamber::instance::CnfFormula;
use chamber::render;

fn main() {
    let f = CnfFormula::from_dimacs(2, &[&[1, -2], &[2]]).unwrap();
    let provenance = Provenance {
        source: SourceProblem::ThreeSat,
        instance_digest: digest(&write_dimacs(&f)),
        parameters: BTreeMap::new(),
    };
    let doc = LevelDocument::new(compile_3sat_turrets(&f).unwrap(), None, provenance);
    let text = doc.to_text();
    let back = LevelDocument::from_text(&text).unwrap();
    assert_eq!(back.to_text(), text);
    println!("{} bytes, first lines:", text.len());
    for line in text.lines().take(8) {
        println!("  {line}");
    }
    println!("{}", render::ascii(&back.level, None));
}

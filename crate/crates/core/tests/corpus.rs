//! The shipped fixture corpus matches what the generator produces today.

use std::fs;
use std::path::Path;

use hodge_gauge::doc::Document;
use hodge_gauge::fixtures::{corpus, counterexamples};

fn check_dir(dir: &Path, docs: &[Document]) {
    for d in docs {
        let name = d.name().expect("corpus documents are named");
        let path = dir.join(format!("{name}.json"));
        let on_disk = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, d.to_json(), "{name} is stale; rerun `hodge-gauge fixtures`");
        let back = Document::parse(&on_disk).unwrap();
        assert_eq!(back.to_json(), on_disk, "{name} does not survive a parse");
    }
    let count = fs::read_dir(dir)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json"))
        .count();
    assert_eq!(count, docs.len(), "unexpected files in {}", dir.display());
}

#[test]
fn shipped_corpus_is_current() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    check_dir(&root, &corpus().unwrap());
    check_dir(&root.join("extra"), &counterexamples().unwrap());
}

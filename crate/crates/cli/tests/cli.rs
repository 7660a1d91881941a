use std::path::Path;
use std::process::{Command, Output};

fn corplex(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corplex"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["--help"][..], &["--version"], &["compare", "--help"]] {
        let o = corplex(dir.path(), args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.txt", "A line.\n");
    let cases: &[&[&str]] = &[
        &[],
        &["nonsense"],
        &["stats", "a.txt", "--condition", "XX"],
        &["ngram", "a.txt", "--boundary", "sideways"],
        &["ngram", "a.txt", "--n", "0"],
        &["sample", "a.txt"],
        &["sample", "a.txt", "--target", "3", "--paired"],
        &["fetch", "not-a-url", "-o", "x"],
    ];
    for args in cases {
        let o = corplex(dir.path(), args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "broken.xml",
        "<mediawiki><page><title>X</title><revision><text>unclosed",
    );
    write(dir.path(), "small.txt", "Just three words.\n");
    write(dir.path(), "bad.tagged", "The/DT cat\n");
    let cases: &[&[&str]] = &[
        &["stats", "missing.txt"],
        &["extract", "broken.xml"],
        &["sample", "small.txt", "--target", "1000"],
        &["pos", "bad.tagged", "bad.tagged"],
        &["fetch", "http://127.0.0.1:9/dump.xml", "-o", "out.xml"],
    ];
    for args in cases {
        let o = corplex(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(
            stderr(&o).starts_with("error: "),
            "{args:?}: {}",
            stderr(&o)
        );
    }
}

#[test]
fn zipf_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "t.txt", "a b a\n");
    let o = corplex(dir.path(), &["plotdata", "t.txt", "--kind", "zipf"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "rank\tfreq\n1\t2\n2\t1\n");
    let o = corplex(
        dir.path(),
        &["plotdata", "t.txt", "--kind", "heaps", "-o", "h.tsv"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("h.tsv")).unwrap(),
        "N\tV\n1\t1\n2\t2\n3\t2\n"
    );
}

#[test]
fn stats_tsv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "t.txt",
        "The cat sat. The cat ran, and the dog sat.\n",
    );
    let o = corplex(dir.path(), &["stats", "t.txt", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let tsv = stdout(&o);
    assert!(
        tsv.starts_with("metric\tvalue\ncondition\tWB\nV\t8\nN\t13\n"),
        "{tsv}"
    );
    let o = corplex(dir.path(), &["stats", "t.txt", "--condition", "WN"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["N"], 10);
    assert_eq!(v["V"], 6);
    assert!(v["heaps_exponent"].is_null());
    write(dir.path(), "mixed.txt", "Café in 東京.\n");
    let o = corplex(dir.path(), &["stats", "mixed.txt", "--latin1-only"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["N"], 3);
}

#[test]
fn ngram_table_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "t.txt", "a b. c d.\n");
    let o = corplex(
        dir.path(),
        &[
            "ngram",
            "t.txt",
            "--n",
            "3",
            "--condition",
            "WN",
            "--format",
            "tsv",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut rows: Vec<&str> = out
        .lines()
        .map(|l| l.rsplit_once('\t').unwrap().0)
        .collect();
    rows.sort();
    assert_eq!(rows, ["a b §", "c d §", "§ a b", "§ c d"]);
    let o = corplex(
        dir.path(),
        &["ngram", "t.txt", "--n", "1", "--condition", "WN"],
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], 4);
    assert_eq!(v["entropy_bits"], 2.0);
}

#[test]
fn pos_comparison_rows() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "a.tagged",
        "The/DT big/JJ dog/NN ran/VBD ./.\nJohn/NNP Smith/NNP left/VBD ./.\n",
    );
    let o = corplex(
        dir.path(),
        &["pos", "a.tagged", "a.tagged", "--format", "tsv"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "n\tsimilarity\tangle_degrees\n2\t1.000000\t0.0000\n3\t1.000000\t0.0000\n4\t1.000000\t0.0000\n5\t1.000000\t0.0000\n"
    );
    let o = corplex(
        dir.path(),
        &[
            "plotdata",
            "a.tagged",
            "--kind",
            "pos-dist",
            "--pos-condition",
            "SO",
        ],
    );
    // The two proper nouns merge into one NNP unit: eight tags in all.
    assert_eq!(
        stdout(&o),
        "tag\trelative_frequency\n.\t0.25\nVBD\t0.25\nDT\t0.125\nJJ\t0.125\nNN\t0.125\nNNP\t0.125\n"
    );
}

#[test]
fn fog_pooled_and_per_document() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "t.txt",
        "The cat sat on the mat.\n\nAn elephant is enormous.\n",
    );
    let o = corplex(dir.path(), &["fog", "t.txt"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // 10 words, 2 sentences, 2 complex words.
    assert_eq!(v["pooled"]["F"], 0.4 * (10.0 / 2.0 + 100.0 * 2.0 / 10.0));
    let o = corplex(
        dir.path(),
        &["fog", "t.txt", "--per-document", "--format", "tsv"],
    );
    assert_eq!(
        stdout(&o),
        "index\twords\tsentences\tcomplex_words\tF\n0\t6\t1\t0\t2.400000\n1\t4\t1\t2\t21.600000\n"
    );
}

#[test]
fn conflict_flags_change_attribution() {
    let dir = tempfile::tempdir().unwrap();
    let rev = |ts: &str, who: &str, text: &str| {
        format!("<revision><timestamp>2010-01-01T00:{ts}:00Z</timestamp><contributor><username>{who}</username></contributor><text>{text}</text></revision>")
    };
    let page = [
        rev("01", "A", "one"),
        rev("02", "B", "two"),
        rev("03", "A", "one"),
        rev("04", "B", "two"),
        rev("05", "C", "three"),
        rev("06", "A", "four"),
        rev("07", "A", "two"),
    ]
    .concat();
    write(
        dir.path(),
        "h.xml",
        &format!("<mediawiki><page><title>P</title><id>7</id>{page}</page></mediawiki>"),
    );
    let o = corplex(dir.path(), &["conflict", "h.xml"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let last = &v[0]["revert_events"][2];
    assert_eq!(last["reverted_editor"], "A");
    assert_eq!(last["self_revert"], true);
    let o = corplex(dir.path(), &["conflict", "h.xml", "--skip-own-edits"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["revert_events"][2]["reverted_editor"], "C");
    let o = corplex(dir.path(), &["conflict", "h.xml", "--earliest"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["revert_events"][2]["restored_rev"], 1);
    let o = corplex(dir.path(), &["conflict", "h.xml", "--format", "tsv"]);
    // A single mutual pair is the heaviest one and is left out.
    assert_eq!(stdout(&o), "page_id\tM\n7\t0\n");
}

#[test]
fn sample_writes_manifest_next_to_output() {
    let dir = tempfile::tempdir().unwrap();
    let pool: String = (0..20)
        .map(|i| format!("Line {i} of the pool.\n\n"))
        .collect();
    write(dir.path(), "pool.txt", &pool);
    let o = corplex(
        dir.path(),
        &[
            "sample", "pool.txt", "--target", "20", "--seed", "7", "-o", "s.txt",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("s.txt.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m["seed"], 7);
    assert_eq!(m["target"], 20);
    assert_eq!(m["achieved"], 20);
    assert_eq!(m["unit"], "word");
    let text = std::fs::read_to_string(dir.path().join("s.txt")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.is_empty()).count(), 4);
}

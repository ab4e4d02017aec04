use std::path::PathBuf;

use exofabric::io::{parse_design_spec, read_dst, render_instructions, write_dst, write_svg};

const DESIGNS: [&str; 3] = ["splint", "bra", "lampshade"];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn outputs(name: &str) -> [(String, Vec<u8>); 3] {
    let text = std::fs::read_to_string(root().join("cookbook").join(format!("{name}.spec"))).unwrap();
    let spec = parse_design_spec(&text).unwrap();
    let plan = spec.compile().unwrap();
    [
        (format!("{name}.dst"), write_dst(&plan, &spec.name).unwrap()),
        (format!("{name}.svg"), write_svg(&plan).into_bytes()),
        (format!("{name}.txt"), render_instructions(&spec).into_bytes()),
    ]
}

#[test]
fn cookbook_outputs_match_goldens() {
    let dir = root().join("tests").join("golden");
    let update = std::env::var_os("UPDATE_GOLDENS").is_some_and(|v| v == "1");
    for name in DESIGNS {
        for (file, bytes) in outputs(name) {
            let path = dir.join(&file);
            if update {
                std::fs::create_dir_all(&dir).unwrap();
                std::fs::write(&path, &bytes).unwrap();
                continue;
            }
            let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}; run with UPDATE_GOLDENS=1", path.display()));
            assert!(want == bytes, "{file} differs from its golden");
        }
    }
}

#[test]
fn golden_dst_files_decode_cleanly() {
    let dir = root().join("tests").join("golden");
    for name in DESIGNS {
        let bytes = std::fs::read(dir.join(format!("{name}.dst"))).unwrap();
        let read = read_dst(&bytes).unwrap();
        assert_eq!(read.header.label, name);
        assert!(read.warnings.is_empty(), "{name}: {:?}", read.warnings);
    }
}

#[test]
fn cli_reproduces_goldens() {
    let tmp = tempfile::tempdir().unwrap();
    for name in DESIGNS {
        let spec = root().join("cookbook").join(format!("{name}.spec"));
        let out = |ext: &str| tmp.path().join(format!("{name}.{ext}")).display().to_string();
        let args = [
            "exofab".to_string(),
            "generate".into(),
            spec.display().to_string(),
            "--dst".into(),
            out("dst"),
            "--svg".into(),
            out("svg"),
            "--instructions".into(),
            out("txt"),
        ];
        let code = exofabric::cli::run(args, &mut Vec::new(), &mut Vec::new());
        assert_eq!(code, 0);
        for (file, bytes) in outputs(name) {
            assert!(std::fs::read(tmp.path().join(&file)).unwrap() == bytes, "{file}");
        }
    }
}

use std::process::Command;

fn sdcpse() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sdcpse"))
}

#[test]
fn circle_study_writes_a_convergence_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("circle.csv");
    let status = sdcpse()
        .args([
            "circle-lb",
            "--np",
            "128",
            "--np",
            "256",
            "--np",
            "512",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "experiment,N_p,h,order_r,rc_factor,dn,N_n,eps_factor,L2,Linf,wall_time_s"
    );
    assert_eq!(lines.count(), 3);
    assert!(String::from_utf8_lossy(&status.stderr).contains("fitted order"));
}

#[test]
fn curvature_of_a_cloud_file_with_estimated_normals() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ball.csv");
    let mut text = String::from("x,y,z\n");
    let n = 1500;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    for i in 0..n {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
        let r = (1.0 - z * z).sqrt();
        let phi = golden * i as f64;
        text.push_str(&format!("{},{},{}\n", r * phi.cos(), r * phi.sin(), z));
    }
    std::fs::write(&input, text).unwrap();

    let missing = sdcpse()
        .arg("bunny-curvature")
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let ok = sdcpse()
        .arg("bunny-curvature")
        .arg("--estimate-normals")
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert_eq!(stdout.lines().count(), n + 1);
}

#[test]
fn configuration_errors_exit_with_2() {
    for args in [
        vec!["no-such-experiment"],
        vec!["circle-lb", "--order", "0"],
        vec!["circle-lb", "--np", "512", "--np", "256"],
        vec!["sphere-lb", "--dt", "-1"],
    ] {
        let out = sdcpse().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failures_exit_with_3() {
    // Fourth-order kernels need more surface neighbors than 1000 sphere
    // points provide.
    let out = sdcpse()
        .args(["sphere-lb", "--order", "4", "--np", "1000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));

    let out = sdcpse()
        .args(["sphere-poisson", "--np", "1000", "--gmres-maxiter", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

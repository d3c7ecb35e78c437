import subprocess
import sys

import pytest

from wturan.cli import EXIT_CAPACITY, EXIT_FALSE, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "rho512", "-n", 19)
    assert code == EXIT_OK
    assert "parts 5 5 9" in out
    assert "density 10/19" in out and "limit 10/19" in out


def test_construct_writes_graph(capsys, tmp_path):
    dest = tmp_path / "g.graph"
    assert run(capsys, "construct", "rho512", "-n", 19, "-o", dest)[0] == EXIT_OK
    code, out, _ = run(capsys, "weight", dest)
    assert code == EXIT_OK and "weight 10/19" in out


def test_lagrangian(capsys, data_dir):
    code, out, _ = run(capsys, "lagrangian", data_dir / "zero3.mat")
    assert code == EXIT_OK and out.startswith("value 0 ")
    code, out, _ = run(capsys, "lagrangian", data_dir / "three_part.mat", "--replicator", "--starts", 3)
    assert code == EXIT_OK
    assert "value 10/19" in out and "x (5/19, 5/19, 9/19)" in out and "kkt verified" in out
    rep = float(out.split("replicator ")[1].split()[0])
    assert abs(rep - 10 / 19) < 1e-9


def test_turan_weight(capsys, data_dir):
    code, out, _ = run(capsys, "weight", data_dir / "petersen.graph", "--turan")
    assert code == EXIT_OK and "weight 3/10" in out


def test_embed_verdicts(capsys, data_dir):
    code, out, _ = run(capsys, "embed", data_dir / "rho512_a.cfg", "-q", 12)
    assert code == EXIT_OK
    assert "verdict FORBIDDEN" in out and "contributions 2,5,5" in out
    code, out, _ = run(capsys, "embed", data_dir / "rho512_readback.cfg", "-q", 12)
    assert code == EXIT_FALSE
    assert "size 11" in out and "ALLOWED" in out


def test_dvalue_budget(capsys, data_dir):
    code, out, err = run(capsys, "dvalue", data_dir / "heavy_1_5.fam", "--alphabet", "0,1/5,1", "--tcap", 6,
                         "--budget", 3)
    assert code == EXIT_CAPACITY
    assert "budget" in err and "lower_bound_only yes" in out


def test_dvalue_full(capsys, data_dir):
    code, out, _ = run(capsys, "dvalue", data_dir / "heavy_1_5.fam", "--alphabet", "0,1/5,1", "--tcap", 6)
    assert code == EXIT_OK
    assert "d 10/19" in out and "lower_bound_only no" in out


@pytest.mark.parametrize("argv", [
    ["lagrangian", "missing.mat"],
    ["lagrangian", "@asym.mat"],
    ["weight", "@dup.graph"],
    ["tables", "--case", "rho999"],
    ["flag", "export", "--case", "mantel"],
    ["flag", "verify", "--case", "mantel"],
])
def test_input_errors(capsys, data_dir, argv):
    argv = [str(data_dir / a[1:]) if a.startswith("@") else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err.startswith("error:")


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["embed"])
    assert exc.value.code == EXIT_USAGE
    capsys.readouterr()


def test_tables_and_expand(capsys):
    code, out, _ = run(capsys, "tables", "--case", "rho512")
    assert code == EXIT_OK
    assert "6\t4/5\t1\tany 5 vertices" in out and "p 5 q 12" in out
    assert "ALLOWED" not in out
    code, out, _ = run(capsys, "expand", "--case", "rho512")
    assert code == EXIT_OK and out.startswith("patterns 785\n")


def test_flag_round_and_verify(capsys, data_dir, tmp_path):
    cert = tmp_path / "m.cert"
    code, out, _ = run(capsys, "flag", "round", "--case", "mantel", "--solution", data_dir / "mantel.sol",
                       "--limit", 1000, "-o", cert)
    assert code == EXIT_OK and "lambda 1/2" in out
    code, out, _ = run(capsys, "flag", "verify", "--case", "mantel", "--cert", cert)
    assert code == EXIT_OK and out.startswith("ACCEPTED lambda 1/2")
    text = cert.read_text().replace("lambda 1/2", "lambda 499/1000")
    bad = tmp_path / "bad.cert"
    bad.write_text(text)
    code, out, _ = run(capsys, "flag", "verify", "--case", "mantel", "--cert", bad)
    assert code == EXIT_FALSE and out.startswith("REJECTED") and "3:" in out


def test_flag_build_and_export(capsys, tmp_path):
    code, out, _ = run(capsys, "flag", "build", "--case", "mantel")
    assert code == EXIT_OK and "blocks 2" in out and "type 0 1: flags 2" in out
    dest = tmp_path / "m.dat-s"
    code, out, _ = run(capsys, "flag", "export", "--case", "mantel", "-o", dest)
    assert code == EXIT_OK and dest.exists()


@pytest.mark.parametrize("argv", [
    ["construct", "rho614", "-n", "23"],
    ["lagrangian", "@three_part.mat"],
    ["embed", "@rho512_a.cfg", "-q", "12"],
    ["flag", "build", "--case", "rho512"],
])
def test_output_is_deterministic(capsys, data_dir, argv):
    argv = [str(data_dir / a[1:]) if a.startswith("@") else a for a in argv]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


def test_console_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "wturan.cli", "embed", str(data_dir / "rho512_readback.cfg"),
                           "-q", "12"], capture_output=True, text=True)
    assert proc.returncode == EXIT_FALSE and "ALLOWED" in proc.stdout

import csv
import io
import json
import math

import pytest

from dequad.cli import EXIT_DOMAIN, EXIT_NO_CONVERGENCE, EXIT_OK, EXIT_PARSE, main
from dequad.engine import RESULT_FIELDS
from dequad.help_text import get_help
from dequad.registry import REGISTRY

I1_EXPR = "exp(20*(x-1))*sin(256*x)"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ============================================================================
# bound
# ============================================================================


def test_bound_reference_value(capsys):
    code, out, _ = run(capsys, "bound", "--h", str(1 / 129), "--c", "2")
    assert code == EXIT_OK
    assert "GError = 3.0451e-05" in out.splitlines()


def test_bound_json(capsys):
    code, out, _ = run(capsys, "bound", "--h", "0.1", "--c", "1", "--format", "json", "--literal")
    assert code == EXIT_OK
    data = json.loads(out)
    assert set(data) == {
        "h",
        "c",
        "global_bound",
        "case1_term",
        "case2_term",
        "k0",
        "h0_limit",
        "below_h0_limit",
        "literal_bound",
    }
    assert data["k0"] == 81
    assert data["below_h0_limit"] is True


def test_bound_case1_not_available_above_limit(capsys):
    code, out, _ = run(capsys, "bound", "--h", "3", "--c", "2")
    assert code == EXIT_OK
    assert "case1 = n/a" in out.splitlines()


@pytest.mark.parametrize("argv", [("--h", "-1", "--c", "2"), ("--h", "0.1", "--c", "0")])
def test_bound_domain(capsys, argv):
    code, out, err = run(capsys, "bound", *argv)
    assert code == EXIT_DOMAIN
    assert out == ""
    assert err


# ============================================================================
# integrate
# ============================================================================


def test_integrate_reference_integral(capsys, verified_registry):
    code, out, _ = run(
        capsys, "integrate", "--expr", I1_EXPR, "--a", "0", "--b", "1",
        "--tol", "1e-10", "--format", "json",
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert tuple(data) == RESULT_FIELDS
    assert abs(data["value"] - REGISTRY["I1"].exact) <= 1e-10
    assert data["evals"] <= 300


def test_integrate_endpoint_singularity(capsys):
    code, out, _ = run(
        capsys, "integrate", "--expr", "1/sqrt(1-x^2)", "--a", "-1", "--b", "1",
        "--tol", "1e-10", "--format", "json",
    )
    assert code == EXIT_OK
    assert abs(json.loads(out)["value"] - math.pi) <= 1e-10


def test_integrate_text_fields(capsys):
    code, out, _ = run(capsys, "integrate", "--expr", "1", "--a", "-1", "--b", "1", "--c", "1.5")
    assert code == EXIT_OK
    labels = [line.split(" = ")[0] for line in out.splitlines()]
    assert labels == ["valor", "evaluaciones", "error estimado", "cota"]


def test_integrate_estimates_c(capsys):
    code, out, _ = run(
        capsys, "integrate", "--expr", "sqrt(1-x^2)", "--a", "-1", "--b", "1", "--format", "json"
    )
    assert code == EXIT_OK
    assert json.loads(out)["bound"] is not None


def test_integrate_syntax_error(capsys):
    code, out, err = run(capsys, "integrate", "--expr", "sin(", "--a", "0", "--b", "1")
    assert code == EXIT_PARSE
    assert out == ""
    assert "4" in err


@pytest.mark.parametrize(
    "extra",
    [
        ("--a", "1", "--b", "0"),
        ("--a", "0", "--b", "1", "--tol", "0"),
        ("--a", "0", "--b", "1", "--c", "-1"),
        ("--a", "0", "--b", "1", "--workers", "0"),
    ],
)
def test_integrate_domain(capsys, extra):
    code, _, _ = run(capsys, "integrate", "--expr", "x", *extra)
    assert code == EXIT_DOMAIN


def test_integrate_non_finite(capsys):
    code, _, err = run(capsys, "integrate", "--expr", "1/x", "--a", "-1", "--b", "1")
    assert code == EXIT_DOMAIN
    assert "k=0" in err


def test_integrate_no_convergence_prints_best_value(capsys):
    code, out, err = run(
        capsys, "integrate", "--expr", "1", "--a", "-1", "--b", "1",
        "--tol", "1e-30", "--c", "1", "--format", "json",
    )
    assert code == EXIT_NO_CONVERGENCE
    data = json.loads(out)
    assert data["level"] == 12
    assert data["value"] == pytest.approx(2.0, abs=1e-14)
    assert err


# ============================================================================
# converge
# ============================================================================


def test_converge_reference_integral(capsys, verified_registry):
    code, out, _ = run(capsys, "converge", "--name", "I1", "--levels", "8", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    rows = data["rows"]
    assert [row["level"] for row in rows] == list(range(8))
    assert rows[-1]["abs_error"] <= 1e-10
    assert data["order"] >= 2.0
    assert all(row["bound"] is not None for row in rows)


def test_converge_constant(capsys, verified_registry):
    code, out, _ = run(capsys, "converge", "--name", "const2", "--levels", "6", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    h0 = REGISTRY["const2"].h0
    assert [row["h"] for row in rows] == [math.ldexp(h0, -level) for level in range(6)]
    assert rows[0]["abs_error"] > rows[2]["abs_error"]
    assert rows[-1]["abs_error"] <= 1e-14


def test_converge_text_has_order(capsys, verified_registry):
    code, out, _ = run(capsys, "converge", "--name", "invsqrt", "--levels", "6")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].split(" | ") == ["level", "h", "evals", "value", "abs_error", "bound"]
    assert len(lines) == 1 + 6 + 1
    assert lines[-1].startswith("p = ")


def test_converge_csv_reports_order(capsys, verified_registry):
    code, out, _ = run(capsys, "converge", "--name", "I1", "--levels", "8", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[-1].startswith("# p = ")
    assert float(lines[-1].removeprefix("# p = ")) >= 2.0
    rows = list(csv.DictReader(line for line in lines if not line.startswith("#")))
    assert [int(row["level"]) for row in rows] == list(range(8))


def test_converge_expression_without_exact(capsys):
    code, out, _ = run(
        capsys, "converge", "--expr", "x^2", "--a", "0", "--b", "1",
        "--levels", "4", "--format", "csv",
    )
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4
    assert rows[-1]["abs_error"] == ""
    assert float(rows[-1]["value"]) == pytest.approx(1 / 3, abs=1e-12)


def test_converge_envelope_check(capsys, verified_registry):
    code, out, _ = run(
        capsys, "converge", "--name", "sqrt_sing", "--levels", "6", "--check-envelope",
        "--format", "json",
    )
    assert code == EXIT_OK
    envelope = json.loads(out)["envelope"]
    assert envelope["status"] == "success"
    assert envelope["checked"]


@pytest.mark.parametrize("levels", ["1", "16"])
def test_converge_levels_out_of_range(capsys, levels):
    code, _, _ = run(capsys, "converge", "--name", "I1", "--levels", levels)
    assert code == EXIT_DOMAIN


def test_converge_unknown_name(capsys):
    code, _, err = run(capsys, "converge", "--name", "nope")
    assert code == EXIT_DOMAIN
    assert "nope" in err


def test_converge_expression_needs_interval(capsys):
    code, _, _ = run(capsys, "converge", "--expr", "x")
    assert code == EXIT_DOMAIN


# ============================================================================
# table1
# ============================================================================


def test_table1_text(capsys, verified_registry):
    code, out, _ = run(capsys, "table1")
    assert code == EXIT_OK
    header, row = out.splitlines()
    assert header.split(" | ") == ["INTEGRAL", "N", "abs. error", "ubge"]
    name, n, error, ubge = row.split(" | ")
    assert name == "I1"
    assert 200 <= int(n) <= 320
    assert float(error) <= 1e-8
    assert ubge == "3.0451e-05"


def test_table1_json(capsys, verified_registry):
    code, out, _ = run(capsys, "table1", "--format", "json")
    assert code == EXIT_OK
    (record,) = json.loads(out)
    assert set(record) == {"integral", "n_evals", "abs_error", "ubge"}
    assert record["n_evals"] <= 320
    assert record["abs_error"] <= 1e-8


# ============================================================================
# sample-decay
# ============================================================================


def test_sample_decay_csv(capsys):
    code, out, _ = run(capsys, "sample-decay", "--c", "2", "--t-max", "3", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 202
    assert lines[0] == "t,value"
    rows = list(csv.DictReader(io.StringIO(out)))
    for i in range(101):
        left, right = rows[i], rows[200 - i]
        assert float(left["t"]) == -float(right["t"])
        assert left["value"] == right["value"]


def test_sample_decay_with_integrand(capsys):
    code, out, _ = run(
        capsys, "sample-decay", "--c", "2", "--t-max", "4", "--name", "const2", "--format", "json"
    )
    assert code == EXIT_OK
    records = json.loads(out)
    assert len(records) == 201
    assert records[100]["integrand"] == pytest.approx(1.5707963267948966)
    assert records[0]["integrand"] == records[200]["integrand"]


# ============================================================================
# Uso y configuración
# ============================================================================


@pytest.mark.parametrize("argv", [(), ("frobnicate",), ("bound", "--h", "0.1")])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_DOMAIN
    assert out == ""
    assert err


def test_format_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("DEQUAD_FORMAT", "json")
    code, out, _ = run(capsys, "bound", "--h", "0.1", "--c", "1")
    assert code == EXIT_OK
    assert json.loads(out)["c"] == 1.0


def test_invalid_environment(capsys, monkeypatch):
    monkeypatch.setenv("DEQUAD_TOL", "muy poca")
    code, _, err = run(capsys, "bound", "--h", "0.1", "--c", "1")
    assert code == EXIT_DOMAIN
    assert "DEQUAD_TOL" in err


def test_help_topics():
    for topic in ("main", "epilog", "integrate", "bound", "converge", "table1", "sample-decay"):
        assert get_help(topic) != "Tema de ayuda desconocido"
    assert get_help("otro") == "Tema de ayuda desconocido"
    assert "Códigos de salida" in get_help("epilog")


@pytest.mark.parametrize("command", ["converge", "sample-decay"])
def test_help_lists_registered_integrals(capsys, command):
    with pytest.raises(SystemExit) as exc:
        main([command, "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for name, entry in REGISTRY.items():
        assert entry.description
        assert f"{name}  " in out
        assert entry.description in out

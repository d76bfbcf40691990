from __future__ import annotations

import shutil

import pytest

from conftest import CORPUS
from mialib.cli import main
from mialib.frontend import parse


@pytest.fixture()
def files(tmp_path):
    def copy(name: str) -> str:
        dst = tmp_path / name
        shutil.copy(CORPUS / name, dst)
        return str(dst)
    return copy


def write(tmp_path, name, text) -> str:
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


# ---------------------------------------------------------------------------
# Exit code 0: holds / defined / compatible / success


def test_refine_blackhole_exit_0(files, tmp_path, capsys):
    bh = files("blackhole.ia")
    any_ia = write(tmp_path, "any.ia",
                   "ia Any { inputs: a; outputs: ; initial s; s -a-> t; }")
    assert main(["refine", bh, any_ia]) == 0
    assert "refinement holds" in capsys.readouterr().out
    assert main(["refine", bh, bh]) == 0


def test_refine_witness_output(files, capsys):
    bh = files("blackhole.ia")
    assert main(["refine", bh, bh, "--witness"]) == 0
    out = capsys.readouterr().out
    assert "b <= b" in out


def test_validate_exit_0(files, capsys):
    assert main(["validate", files("fig08_q.mia")]) == 0
    assert "valid mia" in capsys.readouterr().out


def test_conjoin_writes_output(files, tmp_path, capsys):
    out = tmp_path / "out.mia"
    assert main(["conjoin", files("fig06_p.mia"), files("fig06_q.mia"),
                 "-o", str(out)]) == 0
    parsed = parse(out.read_text(encoding="utf-8"))
    assert parsed.flavor == "mia"


def test_compose_exit_0_and_emits(files, capsys):
    code = main(["compose", files("fig08_p.mia"), files("fig08_q.mia"),
                 "--emit-product", "--emit-pruned-set"])
    assert code == 0
    out = capsys.readouterr().out
    assert "mia fig08_p_x_fig08_q {" in out      # the raw product
    assert "(p0,q1)" in out                       # the pruned set
    assert "error-(b)" in out
    assert "mia fig08_p_par_fig08_q {" in out     # the composition itself


def test_embed_and_dot(files, tmp_path, capsys):
    out = tmp_path / "e.mia"
    assert main(["embed", "--into", "mia", files("blackhole.ia"),
                 "-o", str(out)]) == 0
    assert parse(out.read_text(encoding="utf-8")).flavor == "mia"
    assert main(["embed", "--into", "dmts", files("blackhole.ia")]) == 0
    assert "u@B" in capsys.readouterr().out
    assert main(["dot", files("blackhole.ia")]) == 0
    assert "digraph" in capsys.readouterr().out


def test_equiv_exit_0(files):
    a = files("fig06_q.mia")
    assert main(["equiv", a, a]) == 0


def test_disjoin_reachable_flag(files, capsys):
    assert main(["disjoin", files("fig10_p.mia"), files("fig10_q.mia"),
                 "--reachable"]) == 0
    text = capsys.readouterr().out
    aut = parse(text)
    assert aut.initial.text == "p0|q0"


# ---------------------------------------------------------------------------
# Exit code 1: refinement or equivalence fails


def test_refine_fails_exit_1(files, tmp_path, capsys):
    impl = write(tmp_path, "impl.mia",
                 "mia I { inputs: ; outputs: o; initial s; }")
    spec = write(tmp_path, "spec.mia",
                 "mia S { inputs: ; outputs: o; initial t; "
                 "must t -o-> t; may t -o-> t; }")
    assert main(["refine", impl, spec]) == 1
    assert "clause (i)" in capsys.readouterr().err


def test_equiv_fails_exit_1(files, tmp_path):
    a = write(tmp_path, "a.mia", "mia A { inputs: ; outputs: o; initial s; }")
    b = write(tmp_path, "b.mia", "mia B { inputs: ; outputs: o; initial t; "
              "must t -o-> t; may t -o-> t; }")
    assert main(["equiv", a, b]) == 1


def test_refine_with_states(files, tmp_path):
    spec = write(tmp_path, "s.mia", "mia S { inputs: ; outputs: o; initial t; "
                 "must t -o-> u; may t -o-> u; }")
    impl = write(tmp_path, "i.mia", "mia I { inputs: ; outputs: o; initial s; }")
    # from the dead spec state the dead impl refines
    assert main(["refine", impl, spec, "--spec-state", "u"]) == 0
    assert main(["refine", impl, spec, "--spec-state", "t"]) == 1


# ---------------------------------------------------------------------------
# Exit code 2: usage, parse or validation errors


def test_parse_error_exit_2(tmp_path, capsys):
    bad = write(tmp_path, "bad.mia", "mia M { initial s; s -a-> t; }")
    assert main(["validate", bad]) == 2
    assert "may" in capsys.readouterr().err


def test_validation_error_exit_2(files, capsys):
    assert main(["validate", files("invalid_nondet.ia")]) == 2
    assert "ia-input-determinism" in capsys.readouterr().err


def test_flavor_mismatch_exit_2(files, capsys):
    assert main(["conjoin", files("fig06_p.mia"), files("fig06_q.dmts")]) == 2
    assert "flavor mismatch" in capsys.readouterr().err


def test_missing_file_exit_2(tmp_path):
    assert main(["validate", str(tmp_path / "nope.ia")]) == 2


def test_unknown_subcommand_exit_2(capsys):
    assert main(["frobnicate"]) == 2


def test_compose_dmts_rejected(files):
    assert main(["compose", files("fig06_p.dmts"), files("fig06_q.dmts")]) == 2


def test_not_composable_exit_2(files, tmp_path, capsys):
    a = write(tmp_path, "a.mia", "mia A { inputs: x; outputs: ; initial s; }")
    b = write(tmp_path, "b.mia", "mia B { inputs: x; outputs: ; initial t; }")
    assert main(["compose", a, b]) == 2
    assert "shared action 'x'" in capsys.readouterr().err


def test_embed_non_ia_exit_2(files):
    assert main(["embed", "--into", "mia", files("fig06_p.mia")]) == 2


def test_refine_unknown_state_exit_2(files):
    bh = files("blackhole.ia")
    assert main(["refine", bh, bh, "--impl-state", "nope"]) == 2


def test_invalid_input_rejected_before_refine(files):
    bad = files("invalid_fig12_p.mia")
    good = files("fig12_q.mia")
    assert main(["refine", bad, good]) == 2


# ---------------------------------------------------------------------------
# Exit code 3: inconsistent conjunction / incompatible composition


def test_inconsistent_conjunction_exit_3(tmp_path, capsys):
    p = write(tmp_path, "p.mia", "mia P { inputs: ; outputs: o; initial s; "
              "must s -o-> t; may s -o-> t; }")
    q = write(tmp_path, "q.mia", "mia Q { inputs: ; outputs: o; initial u; }")
    assert main(["conjoin", p, q]) == 3
    assert "inconsistent" in capsys.readouterr().err


def test_incompatible_composition_exit_3(tmp_path, capsys):
    p = write(tmp_path, "p.mia", "mia P { inputs: ; outputs: a; initial s; "
              "may s -a-> s; }")
    q = write(tmp_path, "q.mia", "mia Q { inputs: a; outputs: ; initial t; }")
    assert main(["compose", p, q]) == 3
    assert "incompatible" in capsys.readouterr().err


def test_incompatible_still_emits_diagnostics(tmp_path, capsys):
    p = write(tmp_path, "p.mia", "mia P { inputs: ; outputs: a; initial s; "
              "may s -a-> s; }")
    q = write(tmp_path, "q.mia", "mia Q { inputs: a; outputs: ; initial t; }")
    assert main(["compose", p, q, "--emit-pruned-set"]) == 3
    out = capsys.readouterr().out
    assert "error-(a)" in out

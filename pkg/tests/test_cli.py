"""JSON round trips and the command-line front end."""

import json
from itertools import product

import pytest

from gmcat import jsonio
from gmcat.catoperad import (associativity_operad, barratt_eccles,
                             operad_tables, tabulated_operad, validate_operad)
from gmcat.cli import main
from gmcat.dalgebra import (free_algebra, underlying, validate_algebra,
                            z2_discrete_algebra)
from gmcat.dmulticat import (ClassicalMulticat, terminal_multicat,
                             validate_multicat)
from gmcat.errors import StructuralError
from gmcat.fincat import c1_presheaf, terminal_category, validate_presheaf
from gmcat.finset import perms

BE = barratt_eccles(4)
ASS = associativity_operad(4)


def rt(doc):
    return json.loads(json.dumps(doc))


# ---------------------------------------------------------------------------
# round trips

def test_category_round_trip():
    C = z2_discrete_algebra(BE).carrier
    assert jsonio.decode_category(rt(jsonio.encode_category(C))) == C


def test_presheaf_round_trip():
    P = c1_presheaf(terminal_category())
    P2 = jsonio.decode_presheaf(rt(jsonio.encode_presheaf(P)))
    assert validate_presheaf(P2)["ok"]
    assert P2.carrier == P.carrier and P2.act == P.act


def test_operad_builtin_reference():
    doc = jsonio.encode_operad(BE)
    assert doc == {"kind": "operad", "builtin": "barratt_eccles", "truncate": 4}
    op = jsonio.decode_operad(rt(doc))
    assert op.name == "barratt_eccles" and op.max_level == 4


def test_operad_tabulated_round_trip():
    base = associativity_operad(2)
    at, ct = operad_tables(base)
    custom = tabulated_operad("word2", 2, base.levels, base.unit, at, ct)
    doc = rt(jsonio.encode_operad(custom))
    assert "levels" in doc and "builtin" not in doc
    assert validate_operad(jsonio.decode_operad(doc))["ok"]


def test_multicat_round_trip():
    M = terminal_multicat(BE)
    M2 = jsonio.decode_multicat(rt(jsonio.encode_multicat(M)))
    assert M2.morphisms == M.morphisms and M2.src == M.src
    assert M2.source_action == M.source_action
    assert M2.composition == M.composition


def test_underlying_dump_round_trip():
    # morphism labels here contain monad elements
    U = underlying(z2_discrete_algebra(BE), bound=2)
    U2 = jsonio.decode_multicat(rt(jsonio.encode_multicat(U)))
    assert U2.morphisms == U.morphisms and U2.src == U.src
    assert U2.composition == U.composition


def test_algebra_round_trip_preserves_partiality():
    A = free_algebra(ASS, terminal_category(), carrier_bound=2)
    A2 = jsonio.decode_algebra(rt(jsonio.encode_algebra(A, 2)))
    r1 = validate_algebra(A, arity_bound=2)
    r2 = validate_algebra(A2, arity_bound=2)
    assert r2["ok"] and r2["bounded"] == r1["bounded"]


def test_decode_rejects_unknown_kind():
    with pytest.raises(StructuralError):
        jsonio.decode({"kind": "poset"})


# ---------------------------------------------------------------------------
# fixtures for the command line

def xor_classical():
    """Commutative xor monoid on {0,1} as a symmetric multicategory, cap 2."""
    objs = (0, 1)
    mors, src, tgt = [], {}, {}
    for n in range(3):
        for xs in product(objs, repeat=n):
            f = ("m", xs)
            mors.append(f)
            src[f], tgt[f] = xs, sum(xs) % 2
    comp = {}
    for f in mors:
        pools = [tuple(g for g in mors if tgt[g] == a) for a in src[f]]
        for gs in product(*pools):
            glued = tuple(x for g in gs for x in src[g])
            if len(glued) <= 2:
                comp[(f, gs)] = ("m", glued)
    act = {(f, s.images): ("m", s.permuted(src[f]))
           for f in mors for s in perms(len(src[f]))}
    return ClassicalMulticat(objs, tuple(mors), src, tgt,
                             {a: ("m", (a,)) for a in objs}, comp, act)


def corrupt_operad_doc():
    base = associativity_operad(2)
    at, ct = operad_tables(base)
    doc = jsonio.encode_operad(
        tabulated_operad("word2", 2, base.levels, base.unit, at, ct))
    for row in doc["composition"]:
        if row[:4] == [0, 1, [1], [[2, [1, 2]]]]:
            row[4] = [2, 1]  # gamma(unit; x) now moves x
            return doc
    raise AssertionError("expected entry missing")


# ---------------------------------------------------------------------------
# command line

def run(args, tmp_path, name="report.json"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_cli_validate_builtin_operads(tmp_path):
    code, rep = run(["validate", "operad", "barratt_eccles", "--truncate", "3",
                     "--bound", "3", "--require-sigma-free"], tmp_path)
    assert code == 0 and rep["ok"]
    assert [c["status"] for c in rep["checks"]] == ["pass", "pass"]


def test_cli_commutative_not_free(tmp_path):
    code, rep = run(["validate", "operad", "commutative", "--truncate", "3",
                     "--require-sigma-free"], tmp_path)
    assert code == 1
    fail = [c for c in rep["checks"] if c["status"] == "fail"]
    assert fail[0]["name"] == "sigma freeness"
    assert "fixed_point" in fail[0]["witnesses"][0]


def test_cli_corrupted_gamma_file(tmp_path):
    path = tmp_path / "bad_operad.json"
    jsonio.save(corrupt_operad_doc(), path)
    code, rep = run(["validate", "operad", str(path), "--bound", "2"],
                    tmp_path)
    assert code == 1
    wit = rep["checks"][0]["witnesses"][0]
    assert wit[0] == "left unit fails" and isinstance(wit[1], list)


def test_cli_parse_error_exits_2(tmp_path, capsys):
    path = tmp_path / "mangled.json"
    path.write_text('{"kind": "operad", nope')
    assert main(["validate", "operad", str(path)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_cli_free_hom_counts(tmp_path):
    code, rep = run(["free", "terminal_symmetric", "--hom", "2", "2"],
                    tmp_path)
    assert code == 0 and rep["dump"]["count"] == 4
    code, rep = run(["free", "terminal_nonsymmetric", "--hom", "2", "2"],
                    tmp_path)
    assert code == 0 and rep["dump"]["count"] == 3
    code, rep = run(["free", "terminal_symmetric", "--hom", "0", "0"],
                    tmp_path)
    assert code == 0 and rep["dump"]["count"] == 1


def test_cli_free_hat_vs_quotient(tmp_path):
    args = ["free", "terminal_symmetric", "--hom", '["*", "*"]', '["*"]']
    code, rep = run(args + ["--hat"], tmp_path)
    assert code == 0 and rep["dump"]["count"] == 2
    code, rep = run(args, tmp_path)
    assert code == 0 and rep["dump"]["count"] == 1
    assert rep["dump"]["classes"][0]["members"] == 2


def test_cli_free_beyond_truncation(tmp_path):
    assert main(["free", "terminal_symmetric", "--hom", "5", "5"]) == 3


def test_cli_underlying_dump(tmp_path):
    code, rep = run(["underlying", "z2_discrete", "--bound", "2"], tmp_path)
    assert code == 0
    assert rep["dump"]["morphisms_by_arity"] == {"0": 1, "1": 2, "2": 4}
    M = jsonio.decode_multicat(rep["dump"])
    assert validate_multicat(M)["ok"]


def test_cli_validate_accepts_report_file(tmp_path):
    # a report produced with --out can be fed back in; its dump is unwrapped
    code, rep = run(["underlying", "z2_discrete", "--bound", "2"], tmp_path,
                    name="underlying_report.json")
    assert code == 0
    code, rep = run(["validate", "multicat",
                     str(tmp_path / "underlying_report.json"), "--bound", "2"],
                    tmp_path)
    assert code == 0 and rep["ok"]


def test_cli_underlying_invalid_algebra(tmp_path):
    doc = jsonio.encode_algebra(z2_discrete_algebra(BE), 2)
    for row in doc["xi0"]:
        if row[0]["n"] == 1 and row[0]["xs"] == [1]:
            row[1] = 0  # eta entry now forgets its argument
            break
    path = tmp_path / "broken_algebra.json"
    jsonio.save(doc, path)
    code, rep = run(["underlying", str(path), "--bound", "2"], tmp_path)
    assert code == 1
    assert any(c["name"] == "algebra laws" and c["status"] == "fail"
               for c in rep["checks"])
    assert "dump" not in rep


def test_cli_check_adjunction(tmp_path):
    code, rep = run(["check-adjunction", "terminal_symmetric", "z2_discrete",
                     "--bound", "2"], tmp_path)
    assert code == 0 and rep["ok"]
    assert len(rep["checks"]) == 3


def test_cli_check_adjunction_bounded_exits_3(tmp_path):
    # the free pair at bound 2 passes everywhere it can look, but the
    # counit evaluation pushes some instances past the carrier bound
    code, rep = run(["check-adjunction", "terminal_nonsymmetric", "free",
                     "--operad", "associativity", "--bound", "2"], tmp_path)
    assert code == 3 and rep["ok"]
    by_name = {c["name"]: c for c in rep["checks"]}
    counit = by_name["counit algebra map"]
    assert counit["status"] == "bound-exceeded"
    assert counit["counts"]["bounded"] > 0


def test_cli_check_adjunction_hat_witness(tmp_path):
    code, rep = run(["check-adjunction", "terminal_symmetric", "z2_discrete",
                     "--bound", "2", "--hat"], tmp_path)
    assert code == 1
    assert rep["checks"][0]["status"] == "fail"
    assert "delta" in rep["dump"]["unit_defect"]


def test_cli_operad_mismatch_exits_2(tmp_path, capsys):
    assert main(["check-adjunction", "terminal_nonsymmetric", "z2_discrete",
                 "--bound", "2"]) == 2
    assert "operad mismatch" in capsys.readouterr().err


def test_cli_classical_multicat_file(tmp_path):
    path = tmp_path / "xor.json"
    jsonio.save(jsonio.encode_classical(xor_classical(), True), path)
    code, rep = run(["validate", "multicat", str(path), "--truncate", "2",
                     "--bound", "2"], tmp_path)
    assert code == 0
    assert [c["name"] for c in rep["checks"]] == \
        ["classical multicategory axioms", "multicategory axioms"]


def test_cli_config_invariant(capsys):
    assert main(["validate", "operad", "barratt_eccles",
                 "--truncate", "2", "--bound", "3"]) == 2
    assert "below arity bound" in capsys.readouterr().err


def test_cli_env_bound(tmp_path, monkeypatch):
    monkeypatch.setenv("GMCAT_BOUND", "2")
    code, rep = run(["validate", "algebra", "z2_discrete"], tmp_path)
    assert code == 0 and rep["config"]["bound"] == 2


def test_cli_reports_are_deterministic(tmp_path):
    _, r1 = run(["check-adjunction", "terminal_symmetric", "z2_discrete",
                 "--bound", "2", "--seed", "7"], tmp_path, "a.json")
    _, r2 = run(["check-adjunction", "terminal_symmetric", "z2_discrete",
                 "--bound", "2", "--seed", "7"], tmp_path, "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert r1 == r2
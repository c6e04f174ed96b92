import json

import numpy as np
import pytest

from frameq import (
    Frame,
    GramMatrix,
    apply_gauge,
    census,
    determining_set,
    gram,
    harmonic_frame,
    projective_equiv,
    triple_product_set,
)
from frameq import formats
from frameq.cli import main
from helpers import cycle_frame, mub_frame

HALF_GRAM = np.full((3, 3), 0.5) + 0.5 * np.eye(3)
S2 = 1 / np.sqrt(2)


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else formats.dumps(obj))
    return str(path)


def frame_file(tmp_path, name, V):
    return write(tmp_path, name, formats.frame_to_json(Frame(V)))


def gram_file(tmp_path, name, G):
    return write(tmp_path, name, formats.gram_to_json(GramMatrix(np.asarray(G, dtype=complex))))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gram_output_matches_library(tmp_path, capsys):
    V = mub_frame()
    code, out, _ = run(capsys, "gram", frame_file(tmp_path, "f.json", V))
    assert code == 0
    assert out.strip() == formats.dumps(formats.gram_to_json(gram(Frame(V))))


def test_products_modes(tmp_path, capsys):
    half = gram_file(tmp_path, "half.json", HALF_GRAM)
    code, out, _ = run(capsys, "products", half, "--tuple", "0,1,2")
    assert code == 0
    cycle = json.loads(out)["cycles"][0]
    assert cycle["indices"] == [0, 1, 2]
    assert cycle["value"] == pytest.approx([0.125, 0])

    code, _, err = run(capsys, "products", half, "--tuple", "1,2,3")
    assert code == 4 and "error" in err

    ident = gram_file(tmp_path, "id.json", np.eye(3))
    code, out, _ = run(capsys, "products", ident, "--triples")
    assert code == 0
    assert out.strip() == formats.dumps(formats.products_to_json(triple_product_set(np.eye(3))))
    assert all(c["value"] == [0, 0] for c in json.loads(out)["cycles"])

    mub = frame_file(tmp_path, "mub.json", mub_frame())
    code, out, _ = run(capsys, "products", mub, "--detset")
    assert out.strip() == formats.dumps(formats.products_to_json(determining_set(gram(Frame(mub_frame())))))
    cycles = json.loads(out)["cycles"]
    assert [c["indices"] for c in cycles] == [[0, 2, 1, 3]]
    assert cycles[0]["value"] == pytest.approx([-0.25, 0])


def test_detset_triangles(tmp_path, capsys):
    mub = frame_file(tmp_path, "mub.json", mub_frame())
    code, _, err = run(capsys, "detset", mub, "--triangles")
    assert code == 2 and "triangle" in err
    k4 = gram_file(tmp_path, "k4.json", np.full((4, 4), 1 / 3) + (2 / 3) * np.eye(4))
    code, out, _ = run(capsys, "detset", k4, "--triangles")
    assert code == 0
    assert all(len(c["indices"]) == 3 for c in json.loads(out)["cycles"])


def test_graph(tmp_path, capsys):
    code, out, _ = run(capsys, "graph", frame_file(tmp_path, "mub.json", mub_frame()))
    assert code == 0
    assert json.loads(out) == {"n": 4, "edges": [[0, 2], [0, 3], [1, 2], [1, 3]]}


def test_equiv_exit_codes_and_witness(tmp_path, capsys):
    c1 = frame_file(tmp_path, "c1.json", cycle_frame(4, 1))
    ci = frame_file(tmp_path, "ci.json", cycle_frame(4, 1j))
    code, out, _ = run(capsys, "equiv", c1, "--projective", ci)
    assert code == 1
    expected = projective_equiv(gram(Frame(cycle_frame(4, 1))), gram(Frame(cycle_frame(4, 1j))))
    assert out.strip() == formats.dumps(expected.to_dict())
    assert json.loads(out)["witness"] == {"kind": "cycle", "indices": [0, 1, 2, 3]}

    G = gram(Frame(cycle_frame(4, 1)))
    gauged = gram_file(tmp_path, "g.json", apply_gauge(G, [1, 1j, -1, -1j]).entries)
    code, out, _ = run(capsys, "equiv", c1, gauged, "--projective")
    assert code == 0 and json.loads(out)["equivalent"] is True
    code, out, _ = run(capsys, "equiv", c1, gauged)
    assert code == 1 and json.loads(out)["witness"]["kind"] == "entry"
    code, _, _ = run(capsys, "equiv", c1, c1)
    assert code == 0


def test_equiv_reindex_and_budget(tmp_path, capsys):
    a = gram_file(tmp_path, "a.json", gram(harmonic_frame(3, [0, 1])).entries)
    b = gram_file(tmp_path, "b.json", gram(harmonic_frame(3, [1, 2])).entries)
    code, out, _ = run(capsys, "equiv", a, b, "--projective", "--reindex")
    assert code == 0 and "permutation" in json.loads(out)
    code, _, _ = run(capsys, "equiv", a, b)
    assert code == 1

    c6 = frame_file(tmp_path, "c6.json", cycle_frame(6, 1))
    code, out, _ = run(capsys, "equiv", c6, c6, "--projective", "--reindex", "--budget", "1")
    assert code == 5
    data = json.loads(out)
    assert data["equivalent"] is None and data["witness"]["kind"] == "budget"


def test_size_mismatch_and_invalid_input(tmp_path, capsys):
    two = gram_file(tmp_path, "two.json", np.eye(2))
    three = gram_file(tmp_path, "three.json", np.eye(3))
    assert run(capsys, "equiv", two, three)[0] == 3
    truncated = write(tmp_path, "bad.json", '{"n": 2, "entries": [[[1, 0]')
    code, _, err = run(capsys, "equiv", truncated, two)
    assert code == 2 and "invalid JSON" in err
    assert run(capsys, "equiv", str(tmp_path / "missing.json"), two)[0] == 2
    ragged = write(tmp_path, "ragged.json", {"n": 2, "entries": [[[1, 0]], [[0, 0], [1, 0]]]})
    assert run(capsys, "graph", ragged)[0] == 2
    assert run(capsys, "gram", two)[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "graph", two, "--format", "csv")[0] == 2


def test_reconstruct_path_tree(tmp_path, capsys):
    products = write(tmp_path, "p.json", formats.products_to_json(determining_set(gram(Frame(mub_frame())))))
    code, out, _ = run(capsys, "reconstruct", products, "--tree", "0-2,2-1,1-3")
    assert code == 0
    G = formats.gram_from_json(json.loads(out)).entries
    z = -1
    expected = np.array(
        [[1, 0, S2, z * S2], [0, 1, S2, S2], [S2, S2, 1, 0], [z * S2, S2, 0, 1]],
    )
    assert np.allclose(G, expected)

    code, out, _ = run(
        capsys, "reconstruct", products, "--tree", "0-2,2-1,1-3", "--phase", "0,2=0,1", "--phase", "1,3=-1"
    )
    assert code == 0
    G = formats.gram_from_json(json.loads(out)).entries
    # a = i, b = 1, c = -1 gives z = -ac/b = i
    assert np.conj(G[0, 3] / S2) == pytest.approx(1j)


def test_reconstruct_identity_and_missing_cycle(tmp_path, capsys):
    ident = write(tmp_path, "id.json", formats.products_to_json(determining_set(np.eye(3))))
    code, out, _ = run(capsys, "reconstruct", ident)
    assert code == 0
    assert np.allclose(formats.gram_from_json(json.loads(out)).entries, np.eye(3))

    data = formats.products_to_json(determining_set(gram(Frame(mub_frame()))))
    data["cycles"] = []
    code, _, err = run(capsys, "reconstruct", write(tmp_path, "gap.json", data))
    assert code == 4
    assert "[0, 2, 1, 3]" in err

    code, _, _ = run(capsys, "reconstruct", ident, "--phase", "0,1=oops")
    assert code == 2


def test_reconstruct_warns_on_stderr(tmp_path, capsys):
    data = formats.products_to_json(determining_set(gram(Frame(mub_frame()))))
    data["cycles"][0]["value"] = [0.25, 0.0]
    code, _, err = run(capsys, "reconstruct", write(tmp_path, "flip.json", data))
    assert code == 0
    assert err.startswith("warning:")


def test_harmonic_gen(capsys):
    code, out, _ = run(capsys, "harmonic", "gen", "--group", "3", "--subset", "0,1")
    assert code == 0
    assert out.strip() == formats.dumps(formats.frame_to_json(harmonic_frame(3, [0, 1])))
    code, out, _ = run(capsys, "harmonic", "gen", "--group", "2x2", "--subset", "0,3")
    assert code == 0 and json.loads(out)["dim"] == 2
    assert run(capsys, "harmonic", "gen", "--group", "3", "--subset", "0,5")[0] == 2
    assert run(capsys, "harmonic", "gen", "--group", "axb", "--subset", "0")[0] == 2


def test_harmonic_census(capsys):
    code, out, _ = run(capsys, "harmonic", "census", "--n", "7..8", "--d", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("n,d,")
    assert lines[1:] == [census(7, 3).csv(), census(8, 3).csv()]
    assert lines[2] == "8,3,7,17,4,,,orbits"

    code, out, _ = run(capsys, "harmonic", "census", "--n", "6", "--d", "2", "--mode", "exact", "--format", "json")
    assert code == 0
    row = json.loads(out)
    assert (row["exact_unitary"], row["exact_projective"]) == ("6", "3")
    assert run(capsys, "harmonic", "census", "--n", "2..", "--d", "1")[0] == 2


def test_pretty_output_is_one_based(tmp_path, capsys):
    c1 = frame_file(tmp_path, "c1.json", cycle_frame(4, 1))
    ci = frame_file(tmp_path, "ci.json", cycle_frame(4, 1j))
    code, out, _ = run(capsys, "equiv", c1, ci, "--projective", "--format", "pretty")
    assert code == 1
    assert "1-based" in out and "not equivalent" in out
    assert "cycle 1,2,3,4" in out
    code, out, _ = run(capsys, "graph", frame_file(tmp_path, "mub.json", mub_frame()), "--format", "pretty")
    assert "1-3 1-4 2-3 2-4" in out


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", "7")
    assert code == 0
    report = json.loads(out)
    assert report["seed"] == 7 and report["failed"] == 0

import io
import json

import pytest

from monofact.cli import run

SPECS = {
    "fg.json": {"dim": 2, "kind": "finite", "generators": [[1, 2], [2, 1], [1, 1]]},
    "fg1d.json": {"dim": 1, "kind": "finite", "generators": [[2], [3]]},
    "two.json": {
        "dim": 2,
        "kind": "family",
        "finite_atoms": [],
        "sequences": [
            {"c0": [1, 0], "c1": [2, 1], "c2": [0, 0], "n_start": 1},
            {"c0": [0, 1], "c1": [1, 2], "c2": [0, 0], "n_start": 1},
        ],
    },
    "one.json": {
        "dim": 2,
        "kind": "family",
        "finite_atoms": [],
        "sequences": [{"c0": [1, 2], "c1": [1, 1], "c2": [0, 0], "n_start": 1}],
    },
    "chain25.json": {
        "dim": 2,
        "kind": "family",
        "finite_atoms": [[2, 5]],
        "sequences": [{"c0": [0, 1], "c1": [1, 1], "c2": [0, 0], "n_start": 4}],
    },
    "slopes2.json": {
        "dim": 2,
        "kind": "family",
        "finite_atoms": [],
        "sequences": [
            {"c0": [0, 1], "c1": [4, 4], "c2": [0, 0], "n_start": 1},
            {"c0": [2, 3], "c1": [2, 4], "c2": [0, 0], "n_start": 1},
        ],
    },
    "cube.json": {
        "dim": 3,
        "kind": "family",
        "finite_atoms": [[2, 0, 0], [0, 2, 0], [0, 0, 2]],
        "sequences": [{"c0": [1, 1, 1], "c1": [0, 0, 2], "c2": [0, 0, 0], "n_start": 1}],
    },
}


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def workspace(tmp_path, monkeypatch):
    for name, doc in SPECS.items():
        (tmp_path / name).write_text(json.dumps(doc), encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    return tmp_path


def command_matrix():
    """One invocation per subcommand (run inside the workspace)."""
    return [
        ["atoms", "--spec", "fg.json"],
        ["factorize", "--spec", "fg.json", "--element", "3,3"],
        ["lengths", "--spec", "fg1d.json", "--element", "12"],
        ["lengths", "--spec", "fg.json", "--bound", "200"],
        ["elasticity", "--spec", "fg.json"],
        ["classify", "--spec", "two.json", "--window", "12"],
        ["certify", "--spec", "two.json", "--ratio", "10"],
        ["polyhedral-certify", "--spec", "cube.json", "--ratio", "25"],
        ["gen-lengths", "--spec", "fg1d.json", "--element", "6"],
        ["scan-gen-elasticity", "--spec", "fg1d.json", "--bound", "1000"],
        ["hilbert", "--rays", "1,0;1,3"],
        ["construct", "--count", "5"],
        ["realize", "--set", "4,5,6"],
        ["lift", "--spec", "fg.json", "--dim", "3"],
        ["primary", "--spec", "slopes2.json"],
        ["witness-noniso", "--spec", "one.json", "--other", "two.json"],
        ["verify", "--cert", "cert.json"],
    ]


def prepare_certificate():
    code, _, _ = invoke(["certify", "--spec", "two.json", "--out", "cert.json"])
    assert code == 0

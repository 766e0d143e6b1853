"""The CLI replay corpus: documented examples plus random library instances.

Each case carries the argv, the exit code the library predicts and the
expected stdout line (None when only the exit code is checked, e.g. errors).
"""
from __future__ import annotations

import io
import json
import random
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass
from pathlib import Path

from graphprod.cli import main
from graphprod.conjugacy import are_conjugate, cyclic_reduction, ps_decomposition
from graphprod.formats import format_map, format_presentation, format_witness, parse_class
from graphprod.graph import (
    SimplicialGraph,
    central_vertices,
    format_vertex_set,
    irreducible_components,
    minimal_coneless_subsets,
)
from graphprod.homs import decide_inner, family_from_function, identity_family, inner
from graphprod.residual import SeparationWitness, separate_conjugacy
from graphprod.vertex_groups import cyclic
from graphprod.words import Presentation, conjugate, format_word, reduce, support
from oracles import C2, C3, C4, Z, random_presentation, random_word


@dataclass(frozen=True)
class Case:
    argv: tuple[str, ...]
    code: int
    stdout: str | None


def _verdict(tag, w):
    text = format_word(w)
    return f"{tag} {text}" if text else tag


class _Files:
    def __init__(self, root: Path):
        self.root = root
        self.n = 0

    def write(self, text: str, suffix: str) -> str:
        self.n += 1
        path = self.root / f"f{self.n:04d}{suffix}"
        path.write_text(text, encoding="utf-8")
        return str(path)

    def presentation(self, p: Presentation) -> str:
        return self.write(format_presentation(p), ".gp")


def _no_central(rng, pool):
    while True:
        p = random_presentation(rng, 4, pool, densities=(0.0, 0.3, 0.5))
        if p.vertex_count >= 2 and not central_vertices(p.graph):
            return p


def _set_list(sets):
    return ",".join(format_vertex_set(s) for s in sets) if sets else "none"


def build_corpus(root: Path, seed: int = 2024, scale: int = 1) -> list[Case]:
    files = _Files(root)
    rng = random.Random(seed)
    cases: list[Case] = []
    free = Presentation(SimplicialGraph.edgeless(2), (C2, C2))
    direct = Presentation(SimplicialGraph.complete(2), (C2, C2))
    c3c2 = Presentation(SimplicialGraph.edgeless(2), (C3, C2))
    pf, pd, pc = files.presentation(free), files.presentation(direct), files.presentation(c3c2)

    # examples
    cases += [
        Case(("reduce", "-p", pf, "0:1 0:1 1:1"), 0, "1:1"),
        Case(("reduce", "-p", pd, "1:1 0:1"), 0, "0:1 1:1"),
        Case(("reduce", "-p", pf, ""), 0, ""),
        Case(("conj", "-p", pf, "0:1 1:1", "1:1 0:1"), 0, "CONJUGATE 0:1"),
        Case(("conj", "-p", pf, "0:1 1:1", "0:1 1:1 0:1 1:1"), 1, "NOT_CONJUGATE"),
        Case(("conj", "-p", pf, "0:1 1:1", "0:1 1:1"), 0, "CONJUGATE"),
        Case(("conj", "-p", pf, "0:1 1:1", "1:1 0:1", "--oracle", "2"), 0,
             "CONJUGATE 0:1 | oracle L=2: 0:1 (agree)"),
    ]
    inner_ab = files.write(format_map(inner(free, ((0, 1), (1, 1)))), ".map")
    d = decide_inner(inner(free, ((0, 1), (1, 1))))
    inversion = family_from_function(c3c2, c3c2, lambda s: ((0, 3 - s[1]),) if s[0] == 0 else (s,))
    cases += [
        Case(("decide-inner", "-p", pf, "-m", inner_ab), 0, _verdict("INNER", d.conjugator)),
        Case(("decide-inner", "-p", pc, "-m", files.write(format_map(inversion), ".map")), 1, "NOT_INNER 0:1"),
        Case(("decide-inner", "-p", pc, "-m", files.write(format_map(identity_family(c3c2)), ".map")), 0, "INNER"),
        Case(("decide-inner", "-p", pd, "-m", files.write(format_map(identity_family(direct)), ".map")), 2, None),
    ]
    p3 = Presentation(SimplicialGraph.path(3), (Z, Z, Z))
    cases.append(Case(("analyze", "-p", files.presentation(p3)), 0,
                      "central: 1; coneless: none; components: {0,2},{1}"))
    wfile = str(root / "example.wit")
    w = separate_conjugacy(free, ((0, 1), (1, 1)), ((0, 1), (1, 1), (0, 1), (1, 1)))
    cases.append(Case(("separate", "-p", pf, "0:1 1:1", "0:1 1:1 0:1 1:1", "-o", wfile), 0,
                      f"WITNESS NonConjugacy {wfile}"))
    cases.append(Case(("verify-witness", wfile), 0, "VALID"))
    tampered = format_witness(w).replace("image_y: 0:1 1:1 0:1 1:1", "image_y: 0:1 1:1")
    cases.append(Case(("verify-witness", files.write(tampered, ".wit")), 1, None))

    # input errors
    bad = files.write("vertices: 2\nedges: 0-5\ngroup 0: Z\ngroup 1: Z\n", ".gp")
    cases += [
        Case(("reduce", "-p", bad, "0:1"), 2, None),
        Case(("reduce", "-p", pf, "0:7"), 2, None),
        Case(("reduce", "-p", str(root / "missing.gp"), "0:1"), 2, None),
        Case(("conj", "-p", pf, "0:1", "zz"), 2, None),
        Case(("separate", "-p", pf, "0:1", "1:1", "--class", "4"), 2, None),
        Case(("verify-witness", files.write("vertices: 1\n", ".wit")), 2, None),
    ]

    # random library instances
    for _ in range(40 * scale):
        p = random_presentation(rng)
        pp = files.presentation(p)
        word = random_word(rng, p)
        cases.append(Case(("reduce", "-p", pp, format_word(word)), 0, format_word(reduce(p, word))))
    for _ in range(40 * scale):
        p = random_presentation(rng, 5, (C2, C3, C4, Z))
        pp = files.presentation(p)
        x = reduce(p, random_word(rng, p, 6))
        y = conjugate(p, reduce(p, random_word(rng, p, 3)), x) if rng.random() < 0.5 \
            else reduce(p, random_word(rng, p, 6))
        ans = are_conjugate(p, x, y)
        expect = _verdict("CONJUGATE", ans.conjugator) if ans else "NOT_CONJUGATE"
        cases.append(Case(("conj", "-p", pp, format_word(x), format_word(y)), 0 if ans else 1, expect))
    for _ in range(15 * scale):
        p = _no_central(rng, (C2, C3, C4, Z))
        pp = files.presentation(p)
        f = inner(p, reduce(p, random_word(rng, p, 4, exp_bound=2)))
        d = decide_inner(f, 2)
        cases.append(Case(("decide-inner", "-p", pp, "-m", files.write(format_map(f), ".map"),
                           "--exp-bound", "2"), 0, _verdict("INNER", d.conjugator)))
    for order in (3, 4, 5):
        p = Presentation(SimplicialGraph.from_edges(3, [(1, 2)]), (cyclic(order), C2, C2))
        f = family_from_function(p, p, lambda s, o=order: ((0, o - s[1]),) if s[0] == 0 else (s,))
        cases.append(Case(("decide-inner", "-p", files.presentation(p), "-m",
                           files.write(format_map(f), ".map")), 1, "NOT_INNER 0:1"))
    for _ in range(20 * scale):
        n = rng.randint(1, 6)
        g = SimplicialGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                                           if rng.random() < 0.5])
        p = Presentation(g, (C2,) * n)
        central = sorted(central_vertices(g))
        line = "central: {}; coneless: {}; components: {}".format(
            ",".join(map(str, central)) if central else "none",
            _set_list(minimal_coneless_subsets(g)), _set_list(irreducible_components(g)))
        cases.append(Case(("analyze", "-p", files.presentation(p)), 0, line))
    made = 0
    while made < 15 * scale:
        n = rng.randint(2, 4)
        g = SimplicialGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                                           if rng.random() < 0.3])
        p = Presentation(g, (Z,) * n)
        x = reduce(p, random_word(rng, p, 5))
        y = reduce(p, random_word(rng, p, 5))
        if are_conjugate(p, x, y):
            continue
        x0, y0 = cyclic_reduction(p, x).core, cyclic_reduction(p, y).core
        if len(x0) == len(y0) and support(x0) == support(y0) and ps_decomposition(p, x0).s_vertices:
            continue
        cls = rng.choice(["all", "2", "3"])
        pp = files.presentation(p)
        out = str(root / f"sep{made:03d}.wit")
        res = separate_conjugacy(p, x, y, parse_class(cls))
        assert isinstance(res, SeparationWitness)
        cases.append(Case(("separate", "-p", pp, format_word(x), format_word(y), "--class", cls, "-o", out),
                          0, f"WITNESS NonConjugacy {out}"))
        cases.append(Case(("verify-witness", out), 0, "VALID"))
        made += 1
    cases.append(Case(("separate", "-p", pf, "0:1 1:1", "1:1 0:1"), 1, "ALREADY_CONJUGATE 0:1"))
    return cases


def run_in_process(argv) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def replay_in_subprocess(cases: list[Case], workdir: Path) -> list[list]:
    """Run every case through the CLI in a fresh interpreter; returns [code, stdout, stderr] per case."""
    listing = workdir / "replay.json"
    listing.write_text(json.dumps([list(c.argv) for c in cases]), encoding="utf-8")
    driver = (
        "import io, json, sys\n"
        "from contextlib import redirect_stdout, redirect_stderr\n"
        "from graphprod.cli import main\n"
        "res = []\n"
        "for argv in json.load(open(sys.argv[1])):\n"
        "    o, e = io.StringIO(), io.StringIO()\n"
        "    with redirect_stdout(o), redirect_stderr(e):\n"
        "        c = main(argv)\n"
        "    res.append([c, o.getvalue(), e.getvalue()])\n"
        "json.dump(res, sys.stdout)\n"
    )
    proc = subprocess.run([sys.executable, "-c", driver, str(listing)], capture_output=True,
                          text=True, check=True)
    return json.loads(proc.stdout)

"""Tabular data behind the three worked line examples: (11,3), (12,3) and (38,4)."""

from __future__ import annotations

import csv
import io
import json

from .core import covered_set, format_rational, intervals_of
from .line import compute_hw, efficient_strategy, game_value_line, hider_coprime

FIGURES = {2: (11, 3), 3: (12, 3), 4: (38, 4)}


def figure_data(figure: int) -> dict:
    if figure not in FIGURES:
        raise ValueError(f"unknown figure id {figure}; choose from {sorted(FIGURES)}")
    n, k = FIGURES[figure]
    value, x, y = game_value_line(n, k)
    hw = compute_hw(n, k)
    strategies = []
    for start in x.starts:
        cover = covered_set(efficient_strategy(start, n, k))
        strategies.append({
            "start": start,
            "covered": sorted(cover),
            "intervals": [[iv.start, iv.length] for iv in intervals_of(cover, n)],
        })
    data = {"figure": figure, "n": n, "k": k, "h": hw.h, "w": hw.w, "gcd": hw.g,
            "value": format_rational(value), "strategies": strategies,
            "hider": [format_rational(q) for q in y]}
    if hw.coprime:
        layout = hider_coprime(n, k)[1]
        data["segments"] = [{"start": s.start, "length": s.length, "mass": format_rational(s.mass)}
                            for s in layout.segments]
    return data


def emit_figure_data(figure: int, fmt: str = "csv") -> str:
    data = figure_data(figure)
    if fmt == "json":
        return json.dumps(data, indent=2)
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["kind", "index", "start", "length", "value", "detail"])
    for i, s in enumerate(data["strategies"]):
        out.writerow(["strategy", i, s["start"], len(s["covered"]), "",
                      " ".join(map(str, s["covered"]))])
    for v, q in enumerate(data["hider"]):
        out.writerow(["hider", v, v, 1, q, ""])
    for i, s in enumerate(data.get("segments", ())):
        out.writerow(["segment", i, s["start"], s["length"], s["mass"], ""])
    return buf.getvalue()

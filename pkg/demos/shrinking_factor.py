"""
Shrinking a factor to nothing
=============================

Multiply a space X by lambda*Y in l^inf. The pairing (X, X), (point, lambda*Y)
bounds the distance between X and the product by half of lambda * diam Y,
so the product converges to X as lambda shrinks. This runs the ``bounds``
command on a pairing file for a few values of lambda.
"""

import json
import tempfile
from pathlib import Path

from ghprod.cli import run
from ghprod.metric_core import generate, scale

X = generate("cycle:4")
Y = generate("path:3")

with tempfile.TemporaryDirectory() as tmp:
    for lam in (1.0, 0.5, 0.1, 0.01):
        spec = {"p": "inf", "pairs": [{"x": X.to_json(), "y": X.to_json()},
                                      {"x": "point", "y": scale(Y, lam).to_json()}]}
        path = Path(tmp) / "pairs.json"
        path.write_text(json.dumps(spec))
        code, rep = run(["bounds", "--pairs", str(path), "--exact"])
        r = rep.result
        exact = "n/a" if r.get("exact") is None else f"{r['exact']:.4f}"
        print(f"lambda={lam:<5}  {rep.status:<11}  lower={r['lower']:.4f}  exact={exact}  upper={r['upper']:.4f}")

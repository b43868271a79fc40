import json
import logging
from pathlib import Path

import cvxpy as cp
import numpy as np
import scipy.sparse as sp

from optimization.domain.model.aggregates.ConicProgram import ConicProgram

logger = logging.getLogger(__name__)

FORMAT_NAME = "scs-canonical-json/1"


def _sparse(matrix) -> dict:
    coo = sp.coo_matrix(matrix)
    return {
        "shape": list(coo.shape),
        "row": coo.row.tolist(),
        "col": coo.col.tolist(),
        "val": coo.data.tolist(),
    }


class ConicTextExporter:
    """
    Dumps a program in SCS canonical form:
        minimize 1/2 x'Px + c'x  s.t.  Ax + s = b,  s in K
    with K listed as zero, nonnegative, second-order and PSD cone sizes.
    """

    @staticmethod
    def to_dict(program: ConicProgram) -> dict:
        data, _, _ = program.problem.get_problem_data(cp.SCS)
        dims = data["dims"]
        payload = {
            "format": FORMAT_NAME,
            "name": program.name,
            "n": int(np.asarray(data["c"]).size),
            "m": int(np.asarray(data["b"]).size),
            "c": np.asarray(data["c"], dtype=float).tolist(),
            "b": np.asarray(data["b"], dtype=float).tolist(),
            "A": _sparse(data["A"]),
            "cones": {
                "z": int(getattr(dims, "zero", 0)),
                "l": int(getattr(dims, "nonneg", 0)),
                "q": [int(q) for q in getattr(dims, "soc", [])],
                "s": [int(s) for s in getattr(dims, "psd", [])],
            },
        }
        if data.get("P") is not None:
            payload["P"] = _sparse(data["P"])
        return payload

    @staticmethod
    def dumps(program: ConicProgram) -> str:
        return json.dumps(ConicTextExporter.to_dict(program))

    @staticmethod
    def write(program: ConicProgram, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(ConicTextExporter.dumps(program) + "\n", encoding="utf-8")
        logger.info(f"✓ Program '{program.name}' exported to {path}")
        return path

"""Deterministic CSV/JSON writers.

Floats are written with 17 significant digits (``%.17g`` in CSV, ``%.16e`` in
JSON), ``.`` as decimal separator and ``\\n`` line endings, so identical inputs
give identical bytes. Files are written to a temporary sibling and renamed into
place.
"""
import json
import math
import os
import tempfile

import numpy as np


def fmt_csv(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x) + 0.0, ".17g")  # no "-0"


def csv_text(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(fmt_csv(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _plain(obj, floats):
    if isinstance(obj, dict):
        return {str(k): _plain(v, floats) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v, floats) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist(), floats)
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return bool(obj) if isinstance(obj, np.bool_) else obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj) + 0.0
        if not math.isfinite(x):
            return None
        floats.append(format(x, ".16e"))
        return f"\x00{len(floats) - 1}\x00"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_text(obj):
    """JSON with every float in fixed 17-digit scientific notation; non-finite
    floats become ``null``."""
    floats = []
    text = json.dumps(_plain(obj, floats), indent=2, sort_keys=False)
    for i, s in enumerate(floats):
        text = text.replace(f'"\\u0000{i}\\u0000"', s, 1)
    return text + "\n"


def atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_all(files):
    """Write ``{path: text}``; every target is staged before any rename."""
    staged = []
    try:
        for path, text in files.items():
            directory = os.path.dirname(os.path.abspath(path))
            os.makedirs(directory, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(text)
            staged.append((tmp, path))
        for tmp, path in staged:
            os.replace(tmp, path)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)

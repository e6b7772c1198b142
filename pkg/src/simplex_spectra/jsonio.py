"""JSON read/write helpers shared by every file format in the package.

Floats are written with 17 significant digits so that each value parses back
to the identical IEEE double. The stock C encoder hardcodes repr(), so we
route encoding through the pure-python serializer with our own formatter.
"""

from __future__ import annotations

import json
import math
from json.encoder import encode_basestring_ascii
from pathlib import Path


def _float17(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"non-finite value in JSON payload: {value!r}")
    return format(value, ".17g")


class _Float17Encoder(json.JSONEncoder):
    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        make = json.encoder._make_iterencode
        return make(
            markers,
            self.default,
            encode_basestring_ascii,
            self.indent,
            _float17,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )(o, 0)


def dumps(payload, indent: int = 2) -> str:
    return json.dumps(payload, cls=_Float17Encoder, indent=indent)


def dump(payload, path) -> None:
    Path(path).write_text(dumps(payload) + "\n", encoding="utf-8")


def load(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))

"""Stage manifests: every pipeline stage records the hashes of the files it
read and wrote plus its parameters, so any run can be replayed and verified.
Manifests carry no timestamps or absolute paths and serialize with sorted
keys, which makes re-runs byte-identical."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from . import __version__


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class Manifest:
    stage: str
    params: dict
    inputs: dict[str, dict]
    outputs: dict[str, dict]
    version: str = __version__

    def to_json(self) -> str:
        doc = {
            "stage": self.stage,
            "version": self.version,
            "params": self.params,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def stamp(path: str | Path) -> dict:
    return {"file": Path(path).name, "sha256": file_sha256(path)}


def build_manifest(
    stage: str,
    params: Mapping,
    inputs: Mapping[str, str | Path],
    outputs: Mapping[str, str | Path],
) -> Manifest:
    return Manifest(
        stage=stage,
        params={k: params[k] for k in sorted(params)},
        inputs={name: stamp(p) for name, p in sorted(inputs.items())},
        outputs={name: stamp(p) for name, p in sorted(outputs.items())},
    )


def write_manifest(path: str | Path, manifest: Manifest) -> None:
    Path(path).write_text(manifest.to_json(), encoding="utf-8")


def read_manifest(path: str | Path) -> Manifest:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return Manifest(
        stage=doc["stage"],
        params=doc["params"],
        inputs=doc["inputs"],
        outputs=doc["outputs"],
        version=doc["version"],
    )


def validate_chain(manifests: list[Manifest]) -> list[str]:
    """Check that every stage input seen earlier as an output carries the
    same hash; returns a list of problems (empty when the chain holds)."""
    produced: dict[str, str] = {}
    problems: list[str] = []
    for manifest in manifests:
        for name, info in manifest.inputs.items():
            known = produced.get(info["file"])
            if known is not None and known != info["sha256"]:
                problems.append(
                    f"{manifest.stage}: input {info['file']} hash {info['sha256'][:12]} "
                    f"does not match the producing stage's output {known[:12]}"
                )
        for name, info in manifest.outputs.items():
            produced[info["file"]] = info["sha256"]
    return problems

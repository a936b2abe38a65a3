"""Self-describing model and report documents.

A model file carries everything classification needs: the learned
structure, CPTs and priors, the smoothing and log-base settings, the
fitted discretization schemes and code books, plus the extraction
settings (tick and stimuli layout) and the full pipeline configuration.
Floats serialize through JSON's shortest round-trip representation, so a
reloaded model classifies bit-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .bayes import BayesNet, Cpt, EvaluationReport, NetworkStructure
from .config import (MODEL_FORMAT_VERSION, REPORT_FORMAT_VERSION, PipelineConfig)
from .discretize import scheme_from_dict, scheme_to_dict
from .features import StimuliLayout
from .simulate import layout_from_dict, layout_to_dict


def _structure_to_dict(s: NetworkStructure) -> dict:
    return {
        "class_node": s.class_node,
        "attribute_nodes": list(s.attribute_nodes),
        "class_edges": sorted(s.class_edges),
        "augment_edges": sorted([list(e) for e in s.augment_edges]),
        "threshold_t": s.threshold_t,
    }


def _structure_from_dict(obj: dict) -> NetworkStructure:
    return NetworkStructure(
        class_node=obj["class_node"],
        attribute_nodes=tuple(obj["attribute_nodes"]),
        class_edges=frozenset(obj["class_edges"]),
        augment_edges=frozenset(tuple(e) for e in obj["augment_edges"]),
        threshold_t=float(obj["threshold_t"]),
    )


def model_to_json(net: BayesNet, config: PipelineConfig,
                  layout: StimuliLayout | None = None) -> str:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "config": config.to_dict(),
        "structure": _structure_to_dict(net.structure),
        "class_labels": list(net.class_labels),
        "priors": net.priors.tolist(),
        "smoothing_alpha": net.smoothing_alpha,
        "log_base": net.log_base,
        "cpts": {
            node: {"parents": list(cpt.parents), "table": cpt.table.tolist()}
            for node, cpt in net.cpts.items()
        },
        "schemes": {name: scheme_to_dict(enc)
                    for name, enc in (net.encoders or {}).items()},
    }
    if layout is not None:
        doc["layout"] = layout_to_dict(layout)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class LoadedModel:
    net: BayesNet
    config: PipelineConfig
    layout: StimuliLayout | None


def model_from_json(text: str) -> LoadedModel:
    doc = json.loads(text)
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version!r}")
    structure = _structure_from_dict(doc["structure"])
    cpts = {
        node: Cpt(node=node, parents=tuple(obj["parents"]),
                  table=np.asarray(obj["table"], dtype=float))
        for node, obj in doc["cpts"].items()
    }
    encoders = {name: scheme_from_dict(obj)
                for name, obj in doc.get("schemes", {}).items()} or None
    net = BayesNet(
        structure=structure,
        cpts=cpts,
        priors=np.asarray(doc["priors"], dtype=float),
        class_labels=tuple(doc["class_labels"]),
        smoothing_alpha=float(doc["smoothing_alpha"]),
        log_base=float(doc["log_base"]),
        encoders=encoders,
    )
    layout = layout_from_dict(doc["layout"]) if "layout" in doc else None
    return LoadedModel(net=net, config=PipelineConfig.from_dict(doc["config"]),
                       layout=layout)


def report_to_json(report: EvaluationReport) -> str:
    doc = {"format_version": REPORT_FORMAT_VERSION} | report.to_dict()
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def report_from_json(text: str) -> dict:
    doc = json.loads(text)
    version = doc.get("format_version")
    if version != REPORT_FORMAT_VERSION:
        raise ValueError(f"unsupported report format version {version!r}")
    return doc

"""Sub-word segmentation of handwritten Arabic word images."""

from ._core import (
    Box,
    ParamError,
    ParseError,
    SchemaError,
    SegmentationResult,
    binarize,
    bridge,
    classify_count,
    connect_gaps,
    dilate8,
    histogram,
    iou,
    label8,
    load_pgm,
    majority_fill,
    match_boxes,
    metrics,
    otsu_threshold,
    overlap_ratio,
    parse_truth,
    save_pgm,
    segment_word,
    synth_word,
    thin_zhang_suen,
    write_truth,
)
from ._core import __version__

__all__ = [
    "Box",
    "ParamError",
    "ParseError",
    "SchemaError",
    "SegmentationResult",
    "binarize",
    "bridge",
    "classify_count",
    "connect_gaps",
    "dilate8",
    "histogram",
    "iou",
    "label8",
    "load_pgm",
    "majority_fill",
    "match_boxes",
    "metrics",
    "otsu_threshold",
    "overlap_ratio",
    "parse_truth",
    "save_pgm",
    "segment_word",
    "synth_word",
    "thin_zhang_suen",
    "write_truth",
]

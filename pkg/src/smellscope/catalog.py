"""Detector catalog for the three banks and the threshold keys each one reads."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Detector:
    catalog_id: str
    category: str
    title: str
    keys: tuple[str, ...]  # first key carries enabled/severity for the detector
    rule_based: bool = False  # no numeric threshold; findings report threshold "n/a"
    plumbing: bool = False  # completes the code bank to 24 detectors

    @property
    def primary_key(self) -> str:
        return self.keys[0]


def _code(cid, title, *keys, rule=False, plumbing=False):
    return Detector(cid, "code", title, keys or (cid,), rule, plumbing)


CODE_DETECTORS = (
    _code("LONG_METHOD", "Long Method", "LONG_METHOD_LINES"),
    _code("LARGE_CLASS", "Large Class", "LARGE_CLASS_METHODS"),
    _code("LONG_PARAMETER_LIST", "Long Parameter List", "LONG_PARAMETER_LIST_PARAMS"),
    _code("PRIMITIVE_OBSESSION", "Primitive Obsession", "PRIMITIVE_OBSESSION_PARAMS"),
    _code("DUPLICATE_CODE", "Duplicate Code", "DUPLICATE_CODE_MIN_LINES"),
    _code("DEAD_CODE", "Dead Code", rule=True),
    _code("SPECULATIVE_GENERALITY", "Speculative Generality", rule=True),
    _code("DIVERGENT_CHANGE", "Divergent Change", "DIVERGENT_CHANGE_CLUSTERS"),
    _code("COMPLEX_CONDITIONAL", "Complex Conditional", "COMPLEX_CONDITIONAL_OPERATORS"),
    _code("MESSAGE_CHAIN", "Message Chain", "MESSAGE_CHAIN_LENGTH"),
    _code("FEATURE_ENVY", "Feature Envy", "FEATURE_ENVY_MIN_ACCESSES"),
    _code("DATA_CLUMPS", "Data Clumps", "DATA_CLUMPS_GROUP_SIZE", "DATA_CLUMPS_OCCURRENCES"),
    _code("TEMPORARY_FIELD", "Temporary Field", rule=True),
    _code("POTENTIAL_SHOTGUN_SURGERY", "Potential Shotgun Surgery", "SHOTGUN_SURGERY_MODULES"),
    _code("LOW_COMMENT_RATIO", "Low Comment Ratio", "LOW_COMMENT_RATIO_MIN_LINES",
          "LOW_COMMENT_RATIO_LINES_PER_COMMENT"),
    _code("LARGE_COMMENT_BLOCK", "Large Comment Block", "LARGE_COMMENT_BLOCK_LINES"),
    _code("MISSING_DOCSTRING", "Missing Docstring", rule=True),
    _code("MAGIC_NUMBER", "Magic Number", rule=True, plumbing=True),
    _code("GLOBAL_VARIABLE_ABUSE", "Global Variable Abuse", "GLOBAL_VARIABLE_DECLARATIONS", plumbing=True),
    _code("TOO_MANY_RETURNS", "Too Many Returns", "TOO_MANY_RETURNS_COUNT", plumbing=True),
    _code("LONG_LAMBDA", "Long Lambda", "LONG_LAMBDA_CHARS", plumbing=True),
    _code("MUTABLE_DEFAULT_ARGUMENT", "Mutable Default Argument", rule=True, plumbing=True),
    _code("BROAD_EXCEPT", "Broad Except", rule=True, plumbing=True),
    _code("UNUSED_IMPORT", "Unused Import", rule=True, plumbing=True),
)


# structural detectors: (id, title, metric, scope); the id is also the threshold key
STRUCTURAL_BINDINGS = (
    ("TOO_MANY_BRANCHES", "Too Many Branches", "BRANCH_COUNT", "function"),
    ("HIGH_LOC", "High Lines of Code (LOC)", "LOC", "class"),
    ("HIGH_RFC", "High Response for a Class (RFC)", "RFC", "class"),
    ("HIGH_CYCLOMATIC", "High Cyclomatic Complexity", "CC", "function"),
    ("HIGH_NOM", "High Number of Methods (NOM)", "NOM", "class"),
    ("HIGH_WMPC1", "High Weighted Methods per Class (WMPC1)", "WMPC1", "class"),
    ("HIGH_WMPC2", "High Weighted Methods per Class (WMPC2)", "WMPC2", "class"),
    ("HIGH_LCOM", "High Lack of Cohesion of Methods (LCOM)", "LCOM", "class"),
    ("HIGH_CBO", "High Coupling Between Objects (CBO)", "CBO", "class"),
    ("HIGH_MPC", "High Message Passing Coupling (MPC)", "MPC", "class"),
    ("DEEP_INHERITANCE", "Deep Inheritance Tree (DIT)", "DIT", "class"),
    ("MANY_CHILDREN", "Many Children (NOC)", "NOC", "class"),
    ("HIGH_FAN_IN", "High Fan-in", "FAN_IN", "module"),
    ("HIGH_FAN_OUT", "High Fan-out", "FAN_OUT", "module"),
    ("DEEP_NESTING", "Deep Nesting", "MAX_NESTING", "function"),
    ("LONG_FILE", "Long File", "FILE_LENGTH", "module"),
    ("HIGH_SIZE2", "High Size (SIZE2)", "SIZE2", "class"),
    ("HIGH_ATTR_COUNT", "High Attribute Count", "ATTR_COUNT", "class"),
    ("LONG_MODULE_IMPORTS", "Long Module Imports", "IMPORT_COUNT", "module"),
)

STRUCTURAL_DETECTORS = tuple(Detector(cid, "structural", title, (cid,)) for cid, title, _, _ in STRUCTURAL_BINDINGS)


def _arch(cid, title, *keys, rule=False):
    return Detector(cid, "architectural", title, keys, rule)


ARCHITECTURAL_DETECTORS = (
    _arch("CYCLIC_DEPENDENCY", "Cyclic Dependency", "MAX_CYCLE_LENGTH", "CYCLE_REPORT_CAP"),
    _arch("HUB_LIKE_DEPENDENCY", "Hub-like Dependency", "HUB_MIN_DEGREE", "HUB_RATIO"),
    _arch("UNSTABLE_DEPENDENCY", "Unstable Dependency", "INSTABILITY_GAP"),
    _arch("GOD_OBJECT", "God Object", "GOD_OBJECT_FUNCTIONS", "GOD_OBJECT_METHODS"),
    _arch("SCATTERED_FUNCTIONALITY", "Scattered Functionality", "SCATTER_MODULES"),
    _arch("REDUNDANT_ABSTRACTION", "Potential Redundant Abstractions", "SIMILARITY_THRESHOLD",
          "REDUNDANT_MIN_METHODS"),
    _arch("IMPROPER_API_USAGE", "Potential Improper API Usage", "API_REPEAT_CALLS"),
)

ALL_DETECTORS = CODE_DETECTORS + STRUCTURAL_DETECTORS + ARCHITECTURAL_DETECTORS
DETECTORS = {d.catalog_id: d for d in ALL_DETECTORS}

SECTION_FOR_CATEGORY = {
    "code": "code_smells",
    "structural": "structural_smells",
    "architectural": "architectural_smells",
}

# threshold key -> (section, owning detector)
KEY_OWNERS = {
    key: (SECTION_FOR_CATEGORY[d.category], d)
    for d in ALL_DETECTORS
    for key in d.keys
}

RULE_KEYS = frozenset(d.primary_key for d in ALL_DETECTORS if d.rule_based)


def category_of(catalog_id: str) -> str:
    return DETECTORS[catalog_id].category


def title_of(catalog_id: str) -> str:
    return DETECTORS[catalog_id].title

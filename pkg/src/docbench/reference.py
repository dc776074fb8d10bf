"""Reference latency profiles for the four simulated document stores.

Mean/max/min milliseconds per (database, test kind), measured against the
live cloud services this project simulates at desk scale. The mean table
seeds the default delay models of the sim_* adapters; all three tables serve
as report fixtures and as cross-database ordering targets in the test suite.
"""

from __future__ import annotations

from docbench.model import TestKind

REFERENCE_DATABASES = ("mongodb", "dynamodb", "firebase", "couchdb")

# fmt: off
REFERENCE_MEAN_MS: dict[str, dict[TestKind, int]] = {
    "mongodb": {
        TestKind.UPLOAD_SMALL: 250, TestKind.UPLOAD_LARGE: 1200,
        TestKind.RETRIEVE_SMALL: 160, TestKind.RETRIEVE_LARGE: 740,
        TestKind.UPDATE_SMALL: 250, TestKind.UPDATE_LARGE: 1280,
    },
    "dynamodb": {
        TestKind.UPLOAD_SMALL: 210, TestKind.UPLOAD_LARGE: 680,
        TestKind.RETRIEVE_SMALL: 150, TestKind.RETRIEVE_LARGE: 300,
        TestKind.UPDATE_SMALL: 210, TestKind.UPDATE_LARGE: 680,
    },
    "firebase": {
        TestKind.UPLOAD_SMALL: 70, TestKind.UPLOAD_LARGE: 500,
        TestKind.RETRIEVE_SMALL: 55, TestKind.RETRIEVE_LARGE: 540,
        TestKind.UPDATE_SMALL: 40, TestKind.UPDATE_LARGE: 380,
    },
    "couchdb": {
        TestKind.UPLOAD_SMALL: 470, TestKind.UPLOAD_LARGE: 2800,
        TestKind.RETRIEVE_SMALL: 366, TestKind.RETRIEVE_LARGE: 700,
        TestKind.UPDATE_SMALL: 520, TestKind.UPDATE_LARGE: 2800,
    },
}

REFERENCE_MAX_MS: dict[str, dict[TestKind, int]] = {
    "mongodb": {
        TestKind.UPLOAD_SMALL: 290, TestKind.UPLOAD_LARGE: 2300,
        TestKind.RETRIEVE_SMALL: 170, TestKind.RETRIEVE_LARGE: 1400,
        TestKind.UPDATE_SMALL: 250, TestKind.UPDATE_LARGE: 1800,
    },
    "dynamodb": {
        TestKind.UPLOAD_SMALL: 270, TestKind.UPLOAD_LARGE: 2150,
        TestKind.RETRIEVE_SMALL: 230, TestKind.RETRIEVE_LARGE: 500,
        TestKind.UPDATE_SMALL: 220, TestKind.UPDATE_LARGE: 1200,
    },
    "firebase": {
        TestKind.UPLOAD_SMALL: 179, TestKind.UPLOAD_LARGE: 1050,
        TestKind.RETRIEVE_SMALL: 110, TestKind.RETRIEVE_LARGE: 600,
        TestKind.UPDATE_SMALL: 70, TestKind.UPDATE_LARGE: 800,
    },
    "couchdb": {
        TestKind.UPLOAD_SMALL: 666, TestKind.UPLOAD_LARGE: 4800,
        TestKind.RETRIEVE_SMALL: 400, TestKind.RETRIEVE_LARGE: 900,
        TestKind.UPDATE_SMALL: 700, TestKind.UPDATE_LARGE: 3300,
    },
}

REFERENCE_MIN_MS: dict[str, dict[TestKind, int]] = {
    "mongodb": {
        TestKind.UPLOAD_SMALL: 163, TestKind.UPLOAD_LARGE: 400,
        TestKind.RETRIEVE_SMALL: 150, TestKind.RETRIEVE_LARGE: 400,
        TestKind.UPDATE_SMALL: 220, TestKind.UPDATE_LARGE: 850,
    },
    "dynamodb": {
        TestKind.UPLOAD_SMALL: 100, TestKind.UPLOAD_LARGE: 0,
        TestKind.RETRIEVE_SMALL: 120, TestKind.RETRIEVE_LARGE: 450,
        TestKind.UPDATE_SMALL: 200, TestKind.UPDATE_LARGE: 500,
    },
    "firebase": {
        TestKind.UPLOAD_SMALL: 35, TestKind.UPLOAD_LARGE: 150,
        TestKind.RETRIEVE_SMALL: 30, TestKind.RETRIEVE_LARGE: 400,
        TestKind.UPDATE_SMALL: 30, TestKind.UPDATE_LARGE: 130,
    },
    "couchdb": {
        TestKind.UPLOAD_SMALL: 0, TestKind.UPLOAD_LARGE: 0,
        TestKind.RETRIEVE_SMALL: 300, TestKind.RETRIEVE_LARGE: 500,
        TestKind.UPDATE_SMALL: 400, TestKind.UPDATE_LARGE: 2600,
    },
}
# fmt: on

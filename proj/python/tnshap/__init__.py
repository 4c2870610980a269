# Copyright 2026 The tnshap Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact Shapley values and interaction indices on tensor networks."""

import json

from ._tnshap import Error, Model, cp_teacher, fit, tree_teacher

__all__ = ["Error", "Model", "cp_teacher", "fit", "fit_student", "tree_teacher"]


def fit_student(teacher, x0, **config):
    """Fits a student network around `x0`; returns (model, report dict)."""
    payload = json.dumps({"version": 1, **config}) if config else ""
    model, report = fit(teacher, list(x0), payload)
    return model, json.loads(report)

"""Rule-driven assignment of complication-group labels to case records."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

from rescueaid.case_data.records import CaseRecord
from rescueaid.groups import ComplicationGroup


class LabelRuleError(ValueError):
    """A label rule failed validation at load time."""


@dataclass(frozen=True)
class LabelRule:
    """Maps diagnosis evidence to one complication group.

    A rule matches when any diagnosis code starts with one of its prefixes,
    or any keyword occurs (case-insensitively) in the diagnosis text.
    """

    group: ComplicationGroup
    keywords: tuple[str, ...] = field(default_factory=tuple)
    code_prefixes: tuple[str, ...] = field(default_factory=tuple)

    def matches(self, record: CaseRecord) -> bool:
        text = record.diagnosis_text.lower()
        if any(keyword.lower() in text for keyword in self.keywords):
            return True
        return any(
            code.startswith(prefix) for code in record.diagnosis_codes for prefix in self.code_prefixes
        )


def assign_labels(record: CaseRecord, rules: Iterable[LabelRule]) -> set[ComplicationGroup]:
    """Union of groups whose rules match; no match falls to other-special."""
    matched = {rule.group for rule in rules if rule.matches(record)}
    return matched if matched else {ComplicationGroup.OTHER_SPECIAL}


def load_label_rules(source: Union[str, Path]) -> list[LabelRule]:
    """Load rules from JSON: a list of {group, keywords?, code_prefixes?}.

    Malformed rules are a configuration error at load time, not at apply
    time: unknown groups, non-string predicates, and rules with no
    predicate at all are all rejected here.
    """
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    elif source.lstrip().startswith("["):
        text = source
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LabelRuleError(f"label rules are not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise LabelRuleError("label rules JSON must be a list")

    rules: list[LabelRule] = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict) or "group" not in entry:
            raise LabelRuleError(f"rule #{i}: expected an object with a group field")
        try:
            group = ComplicationGroup.from_id(entry["group"])
        except ValueError as exc:
            raise LabelRuleError(f"rule #{i}: {exc}") from exc
        keywords = entry.get("keywords", [])
        prefixes = entry.get("code_prefixes", [])
        for name, items in (("keywords", keywords), ("code_prefixes", prefixes)):
            if not isinstance(items, list) or not all(isinstance(x, str) and x for x in items):
                raise LabelRuleError(f"rule #{i}: {name} must be a list of non-empty strings")
        if not keywords and not prefixes:
            raise LabelRuleError(f"rule #{i}: needs at least one keyword or code prefix")
        rules.append(LabelRule(group=group, keywords=tuple(keywords), code_prefixes=tuple(prefixes)))
    return rules

"""Walk the case-data pipeline: merge, profile, filter, encode.

Run:  python3 demos/01_case_data_pipeline.py
"""

from rescueaid.case_data import (
    Table,
    build_dictionary,
    build_encoding_scheme,
    filter_cases,
    fit_tfidf,
    merge_case_tables,
    one_hot_encode,
    transform_tfidf,
)

# Rescue records arrive as many overlapping keyed tables. Case IDs are the
# master keys: one patient, several partial rows.
vitals_table = Table(
    columns=["case_id", "SpO2", "HeartRate"],
    rows=[
        {"case_id": "r-100", "SpO2": "95", "HeartRate": "82"},
        {"case_id": "r-101", "SpO2": "88"},
        {"case_id": "r-102", "SpO2": "130", "HeartRate": "77"},  # SpO2 impossible
    ],
    name="vitals.csv",
)
notes_table = Table(
    columns=["case_id", "diagnosis_text", "labels"],
    rows=[
        {"case_id": "r-100", "diagnosis_text": "stable angina, pain on exertion", "labels": "cardiovascular"},
        {"case_id": "r-101", "diagnosis_text": "copd exacerbation", "labels": "pulmonary"},
        {"case_id": "r-102", "diagnosis_text": "suspected stroke", "labels": "cns"},
        {"case_id": "r-103", "diagnosis_text": "fall, laceration", "labels": "other-special"},
    ],
    name="notes.csv",
)

merged, merge_report = merge_case_tables([vitals_table, notes_table])
print(f"merged {merge_report.rows_in} rows -> {merge_report.rows_out} cases "
      f"({merge_report.conflicts} conflicts, last table wins)")
print("columns:", merged.columns)

# Profile every column into a data dictionary. Numeric ranges come from the
# observed span widened 10% per side; descriptions await a human.
dictionary = build_dictionary(merged)
for name, descriptor in dictionary.entries.items():
    print(f"  {name}: {descriptor.semantic_type}"
          + (f" range={descriptor.allowed_range}" if descriptor.allowed_range else ""))

# Tighten SpO2 to its physical range, then filter: out-of-range values are
# nulled and counted; nulls are median-filled per label group when the
# group has enough samples (>= 5), else left null.
dictionary.entries["SpO2"].allowed_range = (0.0, 100.0)
filtered, filter_report = filter_cases(merged, dictionary)
print(f"filter: outliers nulled {filter_report.total_outliers}, "
      f"filled {filter_report.total_fills}, dropped columns {filter_report.dropped_columns}")

# Categorical attributes one-hot encode against sorted vocabularies. On a
# toy table everything has few distinct values, so even free text lands
# under the 20-distinct categorical threshold; at scale it becomes text.
scheme = build_encoding_scheme(filtered, dictionary)
print("labels vocabulary:", scheme.one_hot_vocabs["labels"])
print('one_hot("COPD", [bronchitis, pneumonia, COPD]) =',
      one_hot_encode("COPD", ["bronchitis", "pneumonia", "COPD"]).tolist())

# Free text feeds TF-IDF: rare-but-present terms score high, ubiquitous
# terms score low, and every document vector is unit length.
corpus = [str(row.get("diagnosis_text", "")) for row in filtered.rows]
tfidf = fit_tfidf(corpus)
weights = transform_tfidf("copd with angina", tfidf)
print("tf-idf of 'copd with angina':", {t: round(w, 4) for t, w in sorted(weights.items())})

"""Compose constraints from primitives and inspect the compiled pattern.

Walks the same ground a user covers in the UI: drop primitives onto the
line, edit their parameters, read the generated regex.
"""

import constraintsmith as cs

# A classification line: fixed prefix, then one of three labels.
sentiment = cs.ConstraintSpec((
    cs.ExactText("Sentiment : "),
    cs.MultipleChoice(("positive", "negative", "neutral")),
))
compiled = cs.compile_spec(sentiment)
print("sentiment pattern:", compiled.pattern)

# A bulleted list, 2..4 items, custom bullet. Note every item ends with
# a newline, including the last.
todo = cs.ConstraintSpec((cs.BulletList(bullet="* ", min_items=2, max_items=4),))
print("list pattern:    ", cs.compile_spec(todo).pattern)

# A JSON object with a fixed schema; field order fixes output order.
profile = cs.ConstraintSpec((
    cs.JsonObject((
        cs.JsonField("name", "string"),
        cs.JsonField("age", "number"),
        cs.JsonField("children", "array_of_string"),
        cs.JsonField("playable", "boolean"),
    )),
))
print("json pattern:    ", cs.compile_spec(profile).pattern[:80], "...")

# Validation is data, not exceptions: a UI renders these inline.
draft = cs.ConstraintSpec((cs.SomeText(), cs.SomeText()))
for violation in cs.validate_spec(draft):
    print("violation:", violation.path, "-", violation.message)

# Serialization round-trips canonically; this is the store format.
text = cs.serialize_spec(sentiment)
assert cs.parse_spec(text) == sentiment
print("canonical document:")
print(text)

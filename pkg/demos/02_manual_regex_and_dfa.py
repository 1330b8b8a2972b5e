"""Manual regex editing and the automaton underneath.

Advanced users flip the UI into manual mode and edit the pattern
directly; the dialect keeps them inside DFA-compilable territory and
errors carry offsets for inline highlighting.
"""

import constraintsmith as cs

# The documented bullet tweak: default "- " list rewritten to "* ".
edited = cs.parse_manual_regex(r"\* [^\n]+\n")
print("edited pattern:", edited.pattern)

# Leaving the dialect is caught, with the offset the UI underlines.
for bad in [r"(a)\1", r"a+?", r"^start"]:
    try:
        cs.parse_manual_regex(bad)
    except cs.UnsupportedFeature as exc:
        print(f"rejected {bad!r}: {exc.feature} at offset {exc.offset}")

# Compile to a DFA and poke at it.
automaton = cs.build_dfa(edited.ast)
print("states:", automaton.n_states)
print("matches one item: ", cs.full_match(automaton, "* buy milk\n"))
print("rejects no newline:", not cs.full_match(automaton, "* buy milk"))

# Where exactly does a bad string fail? (drives /v1/validate)
ok, offset = cs.match_prefix(automaton, "- wrong bullet\n")
print("first reject offset:", offset)

# Sample members of the language — handy for eyeballing a constraint.
for seed in range(3):
    print("sample:", repr(cs.sample_string(automaton, seed, max_len=40)))

# The automaton exports as DOT for documentation.
print(cs.to_dot(cs.build_dfa(cs.parse_pattern("(?:a|b)c"))))

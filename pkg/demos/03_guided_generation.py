"""Constrained decoding end to end: the mask guarantees the format.

Uses the bundled 256-token vocabulary and toy scorers; swap in
remote_scorer(url) to drive a real model (docs/scorer-protocol.md).
"""

import json

import constraintsmith as cs

vocab = cs.basic_vocabulary()

profile = cs.ConstraintSpec((
    cs.JsonObject((
        cs.JsonField("name", "string"),
        cs.JsonField("age", "number"),
        cs.JsonField("children", "array_of_string"),
        cs.JsonField("playable", "boolean"),
    )),
))
compiled = cs.compile_spec(profile)
automaton = cs.build_dfa(compiled.ast)
index = cs.build_index(automaton, vocab)

prompt = ("Generate a character profile for a video game, including the "
          "character's name, age, names of their three children, and "
          "whether they can be controlled by the player.")

# A uniform scorer produces gibberish *content* — but perfectly valid
# *format*, which is the point of the guarantee.
result = cs.generate(prompt, index, cs.uniform_scorer(),
                     cs.DecodeParams(seed=11, max_tokens=2048, eos_bias=4.0))
print("finish:", result.finish, "| tokens:", len(result.token_ids))
print(result.text)
obj = json.loads(result.text)  # parses, keys in order, types right
print("parsed keys:", list(obj))

# An echo scorer replays a scripted completion exactly...
sentiment = cs.compile_spec(cs.ConstraintSpec((
    cs.ExactText("Sentiment : "),
    cs.MultipleChoice(("positive", "negative", "neutral")),
)))
s_automaton = cs.build_dfa(sentiment.ast)
s_index = cs.build_index(s_automaton, vocab)
script = cs.encode_greedy(vocab, "Sentiment : negative")
echo = cs.echo_scorer(script)
print(cs.generate("Classify.", s_index, echo, cs.DecodeParams(seed=0)).text)
print("deviations:", echo.deviations)

# ...and when the script tries to violate the constraint, the mask wins:
rogue = cs.echo_scorer(cs.encode_greedy(vocab, "Sentiment : meh. whatever"))
out = cs.generate("Classify.", s_index, rogue, cs.DecodeParams(seed=5))
print("rogue script still yields:", out.text)
print("full match:", cs.full_match(s_automaton, out.text),
      "| first deviation at step:", rogue.deviations[0])

"""Drive the HTTP service: compile, store, generate, validate.

Starts a real server on a local port, exercises the /v1 API with plain
httpx calls, and shuts it down — the same surface the web UI consumes.
"""

import json
import threading
import time

import httpx
import uvicorn

import constraintsmith as cs
from constraintsmith.service import ServiceConfig, create_app

config = ServiceConfig(store_dir="/tmp/constraintsmith-demo-store")
server = uvicorn.Server(
    uvicorn.Config(create_app(config), host="127.0.0.1", port=8731, log_level="error")
)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)
base = "http://127.0.0.1:8731"

sentiment = [
    {"type": "exact_text", "text": "Sentiment : "},
    {"type": "multiple_choice", "choices": ["positive", "negative", "neutral"]},
]

# Compile: the regex panel's source of truth.
resp = httpx.post(f"{base}/v1/compile", json={"constraints": sentiment})
print("compile:", resp.json())

# Store it under a name, get it back byte-identical.
doc = cs.serialize_spec(cs.parse_spec(json.dumps({"primitives": sentiment})))
httpx.put(f"{base}/v1/constraints/sentiment", content=doc)
stored = httpx.get(f"{base}/v1/constraints/sentiment").text
print("store round-trip byte-identical:", stored == doc)

# Generate against the stored constraint; constraints never ride in the prompt.
gen = httpx.post(
    f"{base}/v1/generate",
    json={"prompt": "Classify: loved it.", "stored_name": "sentiment", "params": {"seed": 7}},
).json()
print("generate:", gen)

# Validate the response against its own returned pattern.
check = httpx.post(
    f"{base}/v1/validate", json={"text": gen["text"], "pattern": gen["pattern"]}
).json()
print("validate:", check)

# A manual-edit mistake comes back with the offset the UI highlights.
err = httpx.post(f"{base}/v1/compile", json={"pattern": "(a)\\1"})
print("error surface:", err.status_code, err.json())

server.should_exit = True
thread.join(timeout=5)

#!/usr/bin/env python3
"""Best-effort converter from official-style topic exports to the dialogue
schema in docs/formats.md.

Accepts a JSON array (or {"topics": [...]}) of topic objects shaped like

    {"number": "9-1", "ptkb": {"1": "statement", ...} | [...],
     "turns": [{"turn_id": 1, "utterance": "...", "response": "..."}]}

and writes {"dialogues": [...]}. Field names vary across exports; unknown
shapes are reported rather than guessed silently.
"""

import argparse
import json
import sys


def first(d, *keys):
    for key in keys:
        if key in d and d[key] is not None:
            return d[key]
    return None


def convert_ptkb(raw):
    if raw is None:
        return []
    if isinstance(raw, dict):
        return [{"id": str(k), "text": str(v)} for k, v in sorted(raw.items())]
    if isinstance(raw, list):
        out = []
        for i, item in enumerate(raw, start=1):
            if isinstance(item, str):
                out.append({"id": f"p{i}", "text": item})
            elif isinstance(item, dict):
                out.append({"id": str(first(item, "id", "ptkb_id") or f"p{i}"),
                            "text": str(first(item, "text", "statement") or "")})
        return out
    raise ValueError(f"unsupported ptkb shape: {type(raw).__name__}")


def convert_topic(topic):
    dialogue_id = first(topic, "number", "topic_id", "dialogue_id", "id")
    if dialogue_id is None:
        raise ValueError("topic without an id")
    turns = []
    for i, turn in enumerate(first(topic, "turns", "responses") or [], start=1):
        utterance = first(turn, "utterance", "user_utterance", "question")
        if utterance is None:
            raise ValueError(f"topic {dialogue_id} turn {i}: no utterance")
        out = {"turn_id": str(first(turn, "turn_id", "id") or i),
               "utterance": str(utterance)}
        response = first(turn, "response", "system_response", "answer")
        if response is not None:
            out["response"] = str(response)
        turns.append(out)
    return {"dialogue_id": str(dialogue_id),
            "ptkb": convert_ptkb(first(topic, "ptkb", "persona")),
            "turns": turns}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("input", help="official-style topics JSON")
    parser.add_argument("output", help="dialogue file to write")
    args = parser.parse_args()

    with open(args.input, encoding="utf-8") as f:
        raw = json.load(f)
    topics = raw.get("topics", raw) if isinstance(raw, dict) else raw
    if not isinstance(topics, list):
        sys.exit("error: expected a list of topics")

    dialogues = [convert_topic(t) for t in topics]
    with open(args.output, "w", encoding="utf-8") as f:
        json.dump({"dialogues": dialogues}, f, indent=2, ensure_ascii=False)
        f.write("\n")
    print(f"wrote {len(dialogues)} dialogues -> {args.output}", file=sys.stderr)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Regenerate crates/core/tests/fixtures/vader_reference.json.

Requires the reference scorer: `pip install vaderSentiment==3.3.2`.
The text corpus is deterministic (fixed seed), so re-running this script
reproduces the committed fixture byte for byte.
"""
import json
import random
import sys
from pathlib import Path

from vaderSentiment.vaderSentiment import SentimentIntensityAnalyzer

OUT = Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures/vader_reference.json"

CURATED = [
    "VADER is smart, handsome, and funny.",
    "VADER is smart, handsome, and funny!",
    "VADER is very smart, handsome, and funny.",
    "VADER is VERY SMART, handsome, and FUNNY.",
    "VADER is VERY SMART, handsome, and FUNNY!!!",
    "VADER is VERY SMART, uber handsome, and FRIGGIN FUNNY!!!",
    "VADER is not smart, handsome, nor funny.",
    "The book was good.",
    "At least it isn't a horrible book.",
    "The book was only kind of good.",
    "The plot was good, but the characters are uncompelling and the dialog is not great.",
    "Today SUX!",
    "Today only kinda sux! But I'll get by, lol",
    "Make sure you :) or :D today!",
    "Catch utf-8 emoji such as 💘 and 💋 and 😁",
    "Not bad at all",
    "Sentiment analysis has never been good.",
    "Sentiment analysis has never been this good!",
    "Most automated sentiment analysis tools are shit.",
    "With VADER, sentiment analysis is the shit!",
    "Other sentiment analysis tools can be quite bad.",
    "On the other hand, VADER is quite bad ass",
    "VADER is such a badass!",
    "Without a doubt, excellent idea.",
    "Roger Dodger is one of the most compelling variations on this theme.",
    "Roger Dodger is at least compelling as a variation on the theme.",
    "Roger Dodger is one of the least compelling variations on this theme.",
    "Not such a badass after all.",
    "Without a doubt, an excellent idea.",
    "It was one of the worst movies I've seen, despite good reviews.",
    "Unbelievably bad acting!!",
    "Poor direction.",
    "VERY poor production.",
    "The movie was bad.",
    "Very bad movie.",
    "VERY BAD movie!",
    "balloons", "cake", "candles", "happy birthday", "friends", "laughing", "smiling", "party",
    "riot", "fire", "fight", "blood", "mob", "war", "police", "tear gas",
    "",
    "   ",
    "the table and the chair",
    "12345",
    "!!!",
    "???",
    "👍👍👍",
    "😍😍",
    "😡",
    "I love this phone 😍",
    "Worst phone ever 😡😡",
    "Battery life is great but the camera is bad",
    "Battery life is bad but the camera is great",
    "good good good but bad",
    "bad bad but good good",
    "This phone is the bomb",
    "yeah right, best phone ever",
    "that update was the kiss of death",
    "a camera to die for",
    "no good",
    "no no no",
    "no",
    "not good at all",
    "not bad",
    "never so good",
    "never this bad",
    "it is not the worst",
    "I don't love it",
    "I can't complain",
    "This isn't great.",
    "It's kind of ok I guess",
    "sort of nice",
    "the least good phone",
    "at least it works",
    "very least good",
    "I just LOVE the new design",
    "I HATE IT",
    "I hate it",
    "BEST PHONE EVER",
    "Best PHONE ever",
    "what a great phone!!!!!!",
    "is it good??",
    "is it good???",
    "is it good????",
    "is it bad??",
    "lol",
    "LOL",
    "lmao this is hilarious",
    "Waiting for the iPhone 14 😂😂😂",
    "Who's here after the release? ❤",
    "first",
    "Nice",
    "NICE",
    "nice!",
    "Not nice",
    "It's a must-buy",
    "No doubt the best",
    "Without doubt good",
    "cut the mustard",
    "upper hand",
    "bus stop",
    "beating heart",
    "The screen is absolutely stunning and the speakers are incredibly loud",
    "the phone is slightly disappointing",
    "The camera is barely acceptable",
    "kind of bad",
    "kind-of bad",
    "sorta meh",
    "Thanks for the review bro, really helpful",
    "Such an honest review, subscribed!",
    "Pixel 6 camera is insane",
    "samsung s21 overheating issue is real :(",
    "Please do a comparison with the S22 :-)",
    "I'm not sure about the price, it's too expensive",
    "it's too expensive",
    "Супер телефон",
    "කියන්න",
    "手机很好",
    "good phone",
    "good\tphone\nbad\rscreen",
    "GOOD phone but BAD battery",
    "Love❤️ it",
    "(:",
    ":(",
    ":-(",
    ":'(",
    "<3",
    "</3",
    "!good!",
    "...great...",
    "\"amazing\"",
    "gr8 phone",
    "The iPhone isn't bad, it isn't great either",
    "Never buying samsung again!",
    "I'll never forget how good this was",
    "not so good",
    "not very good",
    "NOT VERY GOOD",
    "this is not very bad",
    "hardly good",
    "it's hardly a disaster",
    "Absolutely LOVE it, but the price is insane",
]

SUBJECTS = ["the phone", "this camera", "battery life", "the iPhone 13", "the screen",
            "Pixel 6", "the Galaxy S21", "this review", "the video", "the design",
            "charging speed", "the price", "face id", "the speakers", "it"]
VERBS = ["is", "was", "looks", "feels", "seems", "has been", "will be", "isn't", "was not"]
POS = ["good", "great", "amazing", "nice", "awesome", "excellent", "beautiful", "love",
       "best", "perfect", "cool", "fantastic", "happy", "impressive", "wonderful", "fine", "ok"]
NEG = ["bad", "terrible", "awful", "poor", "worst", "ugly", "hate", "disappointing",
       "boring", "useless", "broken", "sad", "annoying", "horrible", "overpriced", "weak"]
NEUTRAL = ["phone", "camera", "today", "video", "apple", "android", "notch", "storage",
           "colour", "box", "unboxing", "charger", "upgrade", "model", "blue"]
BOOSTERS = ["very", "really", "extremely", "so", "totally", "incredibly", "slightly",
            "barely", "kinda", "somewhat", "quite", "hardly", "most", "less", "VERY", "REALLY"]
NEGATORS = ["not", "never", "no", "isn't", "don't", "without", "can't", "nor", "nothing",
            "rarely", "aint", "wasnt"]
EMOJI = ["😍", "😂", "👍", "😡", "💔", "😢", "🔥", "😊", "🤮", "🙄", "😭", "❤", "💯", "🤔", "😎"]
EMOTICONS = [":)", ":(", ":D", ":-)", ";)", "XD", ":P", "<3", ":/"]
PUNCT = ["", ".", "!", "!!", "!!!", "!!!!!!", "?", "??", "???", "?????", "?!", "...", ","]
IDIOMS = ["the bomb", "the shit", "bad ass", "yeah right", "kiss of death", "to die for",
          "beating heart", "bus stop", "kind of", "sort of", "at least", "very least",
          "never so", "never this", "without doubt", "without a doubt"]
CONJ = ["but", "and", "BUT", "yet", "although", "but honestly"]


def maybe_caps(rng, w):
    return w.upper() if rng.random() < 0.15 else w


def clause(rng):
    parts = [rng.choice(SUBJECTS)]
    parts.append(rng.choice(VERBS))
    r = rng.random()
    if r < 0.3:
        parts.append(rng.choice(NEGATORS))
    if rng.random() < 0.45:
        parts.append(rng.choice(BOOSTERS))
    if rng.random() < 0.15:
        parts.append(rng.choice(BOOSTERS))
    pool = POS if rng.random() < 0.55 else NEG
    parts.append(maybe_caps(rng, rng.choice(pool)))
    if rng.random() < 0.3:
        parts.append(rng.choice(NEUTRAL))
    return " ".join(parts)


def generated(rng):
    kind = rng.random()
    if kind < 0.45:
        text = clause(rng)
    elif kind < 0.7:
        text = clause(rng) + " " + rng.choice(CONJ) + " " + clause(rng)
    elif kind < 0.8:
        text = clause(rng) + ", " + rng.choice(IDIOMS) + " " + rng.choice(POS + NEG + NEUTRAL)
    elif kind < 0.9:
        words = [maybe_caps(rng, rng.choice(POS + NEG + NEUTRAL + BOOSTERS + NEGATORS))
                 for _ in range(rng.randint(1, 7))]
        text = " ".join(words)
    else:
        text = rng.choice(IDIOMS) + " " + clause(rng)
    if rng.random() < 0.25:
        sep = "" if rng.random() < 0.3 else " "
        text = text + sep + "".join(rng.choice(EMOJI) for _ in range(rng.randint(1, 3)))
    if rng.random() < 0.15:
        text = text + " " + rng.choice(EMOTICONS)
    text = text + rng.choice(PUNCT)
    if rng.random() < 0.1:
        text = text[0].upper() + text[1:]
    return text


def main():
    rng = random.Random(20211)
    texts = list(CURATED)
    seen = set(texts)
    while len(texts) < 1000:
        t = generated(rng)
        if t not in seen:
            seen.add(t)
            texts.append(t)
    analyzer = SentimentIntensityAnalyzer()
    rows = []
    for t in texts:
        s = analyzer.polarity_scores(t)
        rows.append({"text": t, "compound": s["compound"], "pos": s["pos"],
                     "neu": s["neu"], "neg": s["neg"]})
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as f:
        json.dump(rows, f, ensure_ascii=False, indent=1)
        f.write("\n")
    print(f"wrote {len(rows)} fixtures to {OUT}", file=sys.stderr)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
# Regenerates the toy corpora, mock backend scripts and scenario configs in this directory.
# Output is deterministic; rerun after editing and commit the result.

import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
TOY = HERE / "toy"
MOCK = HERE / "mock"
CONFIGS = HERE / "configs"


def write_jsonl(path, records):
    path.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records), encoding="utf-8")


def write_lines(path, lines):
    path.write_text("".join(l + "\n" for l in lines), encoding="utf-8")


# ---------------------------------------------------------------------------
# French -> Levantine parallel test set. The mock lexicon translates word by word, so the
# references below are exactly what localization through the mock produces.

FR_AR = {
    "bonjour": "مرحبا", "mon": "يا", "ami": "رفيقي",
    "quelle": "شو", "belle": "حلوة", "journée": "نهار", "à": "ب",
    "soir": "مسا", "de": "تبع", "fete": "عيد",
    "c'est": "هاد", "trop": "كتير", "drôle": "مضحك",
    "pour": "على", "ton": "تبعك", "cadeau": "هدية",
    "le": "هاد", "match": "الماتش", "ce": "هال", "est": "كان", "nul": "زفت",
    "bravo": "برافو",
    "on": "رح", "se": "نشوف", "voit": "بعض", "demain": "بكرا", "inchallah": "ان شاء الله",
    "concert": "الحفلة", "était": "كانت", "incroyable": "بتجنن",
    "je": "انا", "suis": "كتير", "fatigué": "تعبان", "aujourd'hui": "اليوم", "lundi": "الاتنين", "matin": "الصبح",
    "qui": "مين", "vient": "جاي", "au": "ع", "cinéma": "السينما", "avec": "مع",
    # sentiment vocabulary
    "super": "رائعة", "génial": "الحلو", "magnifique": "رائعة", "j'adore": "بحب", "merci": "ميرسي",
    "film": "الفيلم", "musique": "الموسيقى", "équipe": "الفريق", "série": "المسلسل", "resto": "المطعم",
    "triste": "محزن", "horrible": "أسوأ", "déteste": "بكره", "dommage": "للأسف", "ennuyeux": "ممل",
    "vraiment": "كتير", "ce": "هال",
}

NMT_PAIRS = [
    ("Bonjour mon ami 😂", "مرحبا يا رفيقي 😂"),
    ("Quelle belle journée à Paris #SoirDeFete", "شو حلوة نهار ب باريس #مسا_تبع_عيد"),
    ("lol c'est trop drôle", "لول هاد كتير مضحك"),
    ("@marie merci pour ton cadeau ❤️", "@marie ميرسي على تبعك هدية ❤️"),
    ("Le match de ce soir est nul 😡 https://t.co/abc", "هاد الماتش تبع هال مسا كان زفت 😡 https://t.co/abc"),
    ("Bravo Carlos ! 👏🏽", "برافو كارلوس ! 👏🏽"),
    ("On se voit demain inchallah", "رح نشوف بعض بكرا ان شاء الله"),
    ("OMG le concert était incroyable :D", "اوه ماي غاد هاد الحفلة كانت بتجنن :D"),
    ("Je suis fatigué aujourd'hui 😴 #LundiMatin", "انا كتير تعبان اليوم 😴 #الاتنين_الصبح"),
    ("Qui vient au cinéma avec John ?", "مين جاي ع السينما مع جون ?"),
]

# ---------------------------------------------------------------------------
# Sentiment

FR_POS = ["super", "génial", "magnifique", "j'adore", "bravo"]
FR_NEG = ["triste", "horrible", "déteste", "dommage", "ennuyeux"]
FR_TOPICS = ["film", "musique", "équipe", "série", "resto", "match", "concert", "cadeau"]

AR_POS = ["رائعة", "الخير", "رفيقي", "أهلا وسهلا", "هاهاها", "أفضل", "الحلو", "بالتوفيق"]
AR_NEG = ["محزن", "للأسف", "أسوأ", "زعلان", "صعب", "غبي", "أبكي"]
AR_TOPICS = ["المسلسل", "المباراة", "الفيلم", "الحفلة", "الطقس", "الشغل", "المطعم", "الجامعة", "الدوام"]

ES_HATE = ["odio", "asco", "basura", "vete", "escoria"]
ES_OK = ["amigo", "bonito", "gracias", "partido", "fiesta"]
ES_TOPICS = ["gente", "equipo", "barrio", "ciudad", "noticia", "video"]
ES_AR = {
    "odio": "بكره", "asco": "قرف", "basura": "زبالة", "vete": "انقلع", "escoria": "حثالة",
    "amigo": "صاحبي", "bonito": "حلو", "gracias": "شكرا", "partido": "المباراة", "fiesta": "الحفلة",
    "gente": "الناس", "equipo": "الفريق", "barrio": "الحارة", "ciudad": "المدينة", "noticia": "الخبر",
    "video": "الفيديو", "esta": "هاي", "que": "شو", "la": "ال", "el": "ال", "muy": "كتير",
}

AR_HATE = ["حثالة", "زبالة", "انقلع", "قرف", "وسخ", "حقير"]
AR_OK = ["صاحبي", "حلو", "شكرا", "الله يسعدك", "مبروك", "يا هلا"]


def sentiment_source(rng):
    recs = []
    for i in range(40):
        positive = i % 2 == 0
        word = rng.choice(FR_POS if positive else FR_NEG)
        topic = rng.choice(FR_TOPICS)
        text = rng.choice(["{w} ce {t} !", "{w} le {t} 😂" if positive else "{w} le {t} 😡", "vraiment {w} #{T}"])
        text = text.format(w=word, t=topic, T=topic.capitalize())
        if word == "j'adore":
            text = f"j'adore ce {topic} ❤️"
        recs.append({"id": f"fr-s{i + 1:03d}", "text": text, "lang": "fr", "task": "sentiment",
                     "label": "positive" if positive else "negative", "source": "toy-fr-sentiment"})
    return recs


def arabic_text(rng, words, topics):
    parts = [rng.choice(topics), rng.choice(words)]
    if rng.random() < 0.5:
        parts.append(rng.choice(words))
    rng.shuffle(parts)
    if rng.random() < 0.3:
        parts.append(rng.choice(["😂", "😍", "💔", "😡", "!!"]))
    return " ".join(parts)


def scripted_predictions(ids_true_a, ids_true_b, a_hits, b_misses, rng):
    """a_hits ids of class A predicted A (rest B); b_misses ids of class B predicted A."""
    a = list(ids_true_a)
    b = list(ids_true_b)
    rng.shuffle(a)
    rng.shuffle(b)
    return set(a[:a_hits]), set(b[:b_misses])


def sentiment_external(rng):
    # 59 positive, 40 negative native Levantine messages.
    labels = ["positive"] * 59 + ["negative"] * 40
    rng.shuffle(labels)
    recs = []
    for i, label in enumerate(labels):
        words = AR_POS if label == "positive" else AR_NEG
        recs.append({"id": f"lev-s{i + 1:03d}", "text": arabic_text(rng, words, AR_TOPICS), "lang": "ar-lev",
                     "task": "sentiment", "label": label, "source": "toy-lev-sentiment"})
    return recs


def hate_source(rng):
    recs = []
    for i in range(40):
        hate = i % 3 == 0
        word = rng.choice(ES_HATE if hate else ES_OK)
        topic = rng.choice(ES_TOPICS)
        text = rng.choice(["{w} esta {t}", "que {w} la {t} !!", "{t} muy {w} @user{n}"]).format(w=word, t=topic, n=i)
        recs.append({"id": f"es-h{i + 1:03d}", "text": text, "lang": "es", "task": "hate",
                     "label": "hate" if hate else "no_hate", "source": "toy-es-hate"})
    return recs


def hate_external(rng):
    labels = ["hate"] * 100 + ["no_hate"] * 167
    rng.shuffle(labels)
    recs = []
    for i, label in enumerate(labels):
        words = AR_HATE if label == "hate" else AR_OK
        recs.append({"id": f"lev-h{i + 1:03d}", "text": arabic_text(rng, words, AR_TOPICS), "lang": "ar-lev",
                     "task": "hate", "label": label, "source": "toy-lev-hate"})
    return recs


def mock_file(path, header, lexicon=None, pairs=(), labels=None, metrics=None, model=None, default=None):
    lines = [f"# {header}"]
    if model:
        lines.append(f"%model\t{model}")
    for s, t in pairs:
        lines.append(f"%pair\t{s}\t{t}")
    if metrics:
        lines.append("%metrics\t" + " ".join(f"{m:.2f}" for m in metrics))
    if default:
        lines.append(f"%default\t{default[0]}\t{default[1]}")
    for k in sorted(lexicon or {}):
        lines.append(f"{k}\t{lexicon[k]}")
    for rid in sorted(labels or {}):
        lines.append(f"%label\t{rid}\t{labels[rid]}")
    write_lines(path, lines)


TRAINING = """training:
  pipeline: osb-clean
  split: {train: 0.8, validation: 0.2}
  eval_every: 100
  early_stop: {patience: 5, min_delta: 0.0001}
  poll_interval_ms: 0
  # Passed to the model service verbatim. These are the optimizer settings listed for the
  # pretrained encoder; whether they also suit fine-tuning is left to the service.
  hyperparams: {learning_rate: "1e-4", weight_decay: "0.01", warmup_steps: "10000"}
"""


def main():
    rng = random.Random(20240607)
    for d in (TOY, MOCK, CONFIGS):
        d.mkdir(exist_ok=True)

    write_jsonl(TOY / "nmt.fr-ar-lev.jsonl", [
        {"pair_id": f"p{i + 1:02d}", "src_text": s, "src_lang": "fr", "tgt_text": t, "tgt_lang": "ar-lev",
         "source": "toy-fr-lev"} for i, (s, t) in enumerate(NMT_PAIRS)])
    mock_file(MOCK / "fr-ar-lev.mock", "French -> Levantine word-by-word translator", FR_AR, pairs=[("fr", "ar-lev")])
    mock_file(MOCK / "empty.mock", "Translator that returns empty strings", {}, pairs=[("fr", "ar-lev")])
    (MOCK / "empty.mock").write_text((MOCK / "empty.mock").read_text() + "%empty\n", encoding="utf-8")

    src = sentiment_source(rng)
    write_jsonl(TOY / "sentiment.fr.jsonl", src)
    ext = sentiment_external(rng)
    write_jsonl(TOY / "sentiment.external.ar-lev.jsonl", ext)
    # Confusion matrix (rows true, cols predicted; positive first): [[49, 10], [13, 27]].
    pos_hit, neg_miss = scripted_predictions([r["id"] for r in ext if r["label"] == "positive"],
                                             [r["id"] for r in ext if r["label"] == "negative"], 49, 13, rng)
    labels = {}
    for r in ext:
        if r["label"] == "positive":
            labels[r["id"]] = "positive" if r["id"] in pos_hit else "negative"
        else:
            labels[r["id"]] = "positive" if r["id"] in neg_miss else "negative"
    mock_file(MOCK / "sentiment.mock", "French -> Levantine translator and scripted Levantine sentiment classifier",
              FR_AR, pairs=[("fr", "ar-lev")], labels=labels,
              metrics=[0.61, 0.66, 0.71, 0.69, 0.70, 0.68, 0.67, 0.66, 0.65, 0.64], model="sent-lev")

    hsrc = hate_source(rng)
    write_jsonl(TOY / "hate.es.jsonl", hsrc)
    hext = hate_external(rng)
    write_jsonl(TOY / "hate.external.ar-lev.jsonl", hext)
    hate_ids = [r["id"] for r in hext if r["label"] == "hate"]
    ok_ids = [r["id"] for r in hext if r["label"] == "no_hate"]
    rng.shuffle(hate_ids)
    rng.shuffle(ok_ids)
    # Levantine model: TP 68, FN 32, FP 35, TN 132. Gulf model: TP 54, FN 46, FP 23, TN 144.
    lev_hate = set(hate_ids[:68]) | set(ok_ids[:35])
    glf_hate = set(hate_ids[10:64]) | set(ok_ids[20:43])
    for name, flagged, model, metrics in (
            ("hate-lev", lev_hate, "hate-lev", [0.58, 0.63, 0.66, 0.68, 0.67, 0.68]),
            ("hate-glf", glf_hate, "hate-glf", [0.55, 0.60, 0.64, 0.66, 0.70, 0.69, 0.68])):
        labels = {r["id"]: ("hate" if r["id"] in flagged else "no_hate") for r in hext}
        mock_file(MOCK / f"{name}.mock", f"Scripted {name} classifier", ES_AR, labels=labels, metrics=metrics, model=model)
    mock_file(MOCK / "es-ar.mock", "Spanish -> Arabic word-by-word translator", ES_AR,
              pairs=[("es", "ar-lev"), ("es", "ar-glf")])

    (CONFIGS / "nmt.yaml").write_text(
        "kind: nmt\nname: toy-nmt\nseed: 42\nbackend: mock:../mock/fr-ar-lev.mock\n"
        "inputs:\n  test: ../toy/nmt.fr-ar-lev.jsonl\n", encoding="utf-8")
    (CONFIGS / "sentiment.yaml").write_text(
        "kind: sentiment\nname: toy-sentiment\nseed: 42\nbackend: mock:../mock/sentiment.mock\n"
        "inputs:\n  source: ../toy/sentiment.fr.jsonl\n  external: ../toy/sentiment.external.ar-lev.jsonl\n"
        "target: ar-lev\ntop_k: 50\n" + TRAINING, encoding="utf-8")
    (CONFIGS / "hate.yaml").write_text(
        "kind: hate\nname: toy-hate\nseed: 42\nbackend: mock:../mock/es-ar.mock\n"
        "inputs:\n  source: ../toy/hate.es.jsonl\n  external: ../toy/hate.external.ar-lev.jsonl\n"
        "models:\n  - target: ar-lev\n    backend: mock:../mock/hate-lev.mock\n"
        "  - target: ar-glf\n    backend: mock:../mock/hate-glf.mock\n" + TRAINING, encoding="utf-8")
    (CONFIGS / "train-sentiment.yaml").write_text(
        "name: toy-train-sentiment\ntask: sentiment\nseed: 42\n"
        "corpora:\n  fr: ../toy/sentiment.fr.jsonl\n"
        "split: {train: 0.8, validation: 0.2}\npipeline: osb-clean\neval_every: 100\n"
        "early_stop: {patience: 5, min_delta: 0.0001}\n"
        "backend: {endpoint: mock:../mock/sentiment.mock, timeout: 30, max_in_flight: 4, retry: {attempts: 3, backoff_ms: 200}}\n"
        "poll_interval_ms: 0\n"
        "hyperparams: {learning_rate: \"1e-4\", weight_decay: \"0.01\", warmup_steps: \"10000\"}\n", encoding="utf-8")


if __name__ == "__main__":
    main()

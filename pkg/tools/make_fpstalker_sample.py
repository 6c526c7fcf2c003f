#!/usr/bin/env python3
"""Regenerate the bundled FPStalker-format sample (deterministic, seeded).

The real dataset download is large and not redistributable here; this produces
a structurally faithful, synthetic excerpt in the same export schema so the
import pipeline can be exercised at desk scale. Run from the repo root:

    python3 tools/make_fpstalker_sample.py
"""

import csv
import random
from datetime import datetime, timedelta
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "fpselect" / "data" / "fpstalker_sample.csv"

UA_TEMPLATES = [
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/{c}.0.{b}.{p} Safari/537.36",
    "Mozilla/5.0 (Windows NT 6.1; WOW64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/{c}.0.{b}.{p} Safari/537.36",
    "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/{c}.0.{b}.{p} Safari/537.36",
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64; rv:{f}.0) Gecko/20100101 Firefox/{f}.0",
    "Mozilla/5.0 (X11; Ubuntu; Linux x86_64; rv:{f}.0) Gecko/20100101 Firefox/{f}.0",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_12_3) AppleWebKit/602.4.8 (KHTML, like Gecko) Version/10.0.3 Safari/602.4.8",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_11_6) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/{c}.0.{b}.{p} Safari/537.36",
]
ACCEPTS = [
    "text/html,application/xhtml+xml,application/xml;q=0.9,image/webp,*/*;q=0.8",
    "text/html,application/xhtml+xml,application/xml;q=0.9,*/*;q=0.8",
]
ENCODINGS = ["gzip, deflate, br", "gzip, deflate", "gzip, deflate, sdch, br"]
LANGUAGES = [
    "fr-FR,fr;q=0.8,en-US;q=0.6,en;q=0.4", "en-US,en;q=0.5", "en-GB,en;q=0.8",
    "de-DE,de;q=0.8,en-US;q=0.6", "es-ES,es;q=0.8", "fr,fr-FR;q=0.8,en-US;q=0.5,en;q=0.3",
    "it-IT,it;q=0.8,en-US;q=0.6", "pt-BR,pt;q=0.8,en-US;q=0.6,en;q=0.4",
]
ORDERS = [
    "Host User-Agent Accept Accept-Language Accept-Encoding",
    "Host Connection Accept User-Agent Accept-Encoding Accept-Language",
]
PLUGIN_SETS = [
    "Plugin 0: Chrome PDF Viewer; Plugin 1: Native Client; Plugin 2: Widevine Content Decryption Module.",
    "Plugin 0: Chrome PDF Viewer; Plugin 1: Shockwave Flash 24.0 r0; Plugin 2: Native Client.",
    "Plugin 0: Shockwave Flash 24.0 r0.",
    "",
]
PLATFORMS = ["Win32", "Linux x86_64", "MacIntel", "Win64"]
TIMEZONES = ["-60", "-120", "0", "60", "120", "300", "-180"]
RESOLUTIONS = ["1920,1080,24", "1366,768,24", "1440,900,24", "2560,1440,24", "1600,900,24", "1280,1024,24"]
RENDERERS = [
    "ANGLE (Intel(R) HD Graphics 4000 Direct3D11 vs_5_0 ps_5_0)",
    "ANGLE (NVIDIA GeForce GTX 960 Direct3D11 vs_5_0 ps_5_0)",
    "Mesa DRI Intel(R) Haswell Mobile",
    "not supported",
]
VENDORS = ["Google Inc.", "Intel Open Source Technology Center", "not supported"]

HEADER = [
    "counter", "id", "creationDate", "endDate",
    "userAgentHttp", "acceptHttp", "encodingHttp", "languageHttp", "orderHttp",
    "pluginsJS", "platformJS", "cookiesJS", "dntJS", "timezoneJS",
    "resolutionJS", "localJS", "canvasJSHashed", "rendererWebGLJS", "vendorWebGLJS",
]


def main() -> None:
    rng = random.Random(180221)
    start = datetime(2017, 1, 4, 8, 0, 0)
    rows = []
    counter = 0
    for b in range(520):
        browser_id = f"b{b:04d}"
        family = rng.randrange(len(UA_TEMPLATES))
        chrome = rng.randint(52, 57)
        firefox = rng.randint(45, 52)
        build = rng.randint(2700, 3100)
        patch = rng.randint(50, 140)
        profile = {
            "acceptHttp": rng.choice(ACCEPTS),
            "encodingHttp": rng.choice(ENCODINGS),
            "languageHttp": rng.choice(LANGUAGES),
            "orderHttp": rng.choice(ORDERS),
            "pluginsJS": rng.choice(PLUGIN_SETS),
            "platformJS": rng.choice(PLATFORMS),
            "cookiesJS": "yes",
            "dntJS": rng.choice(["NC", "yes", "no"]),
            "timezoneJS": rng.choice(TIMEZONES),
            "resolutionJS": rng.choice(RESOLUTIONS),
            "localJS": rng.choice(["yes", "yes", "yes", "no"]),
            "canvasJSHashed": f"{rng.getrandbits(64):016x}",
            "rendererWebGLJS": rng.choice(RENDERERS),
            "vendorWebGLJS": rng.choice(VENDORS),
        }
        when = start + timedelta(minutes=rng.randint(0, 60 * 24 * 30))
        n_records = rng.choices([1, 2, 3, 4, 5, 6], weights=[30, 25, 20, 12, 8, 5])[0]
        for _ in range(n_records):
            counter += 1
            ua = UA_TEMPLATES[family].format(c=chrome, f=firefox, b=build, p=patch)
            row = {
                "counter": str(counter),
                "id": browser_id,
                "creationDate": when.strftime("%Y-%m-%d %H:%M:%S"),
                "endDate": "",
                "userAgentHttp": ua,
                **profile,
            }
            rows.append([row[col] for col in HEADER])
            # evolve: browser updates and occasional environment changes
            when += timedelta(days=rng.randint(1, 21), minutes=rng.randint(0, 600))
            if rng.random() < 0.55:
                chrome += 1 if rng.random() < 0.7 else 0
                firefox += 1 if rng.random() < 0.7 else 0
                patch = rng.randint(50, 140)
            if rng.random() < 0.12:
                profile["pluginsJS"] = rng.choice(PLUGIN_SETS)
            if rng.random() < 0.06:
                profile["resolutionJS"] = rng.choice(RESOLUTIONS)
            if rng.random() < 0.08:
                profile["canvasJSHashed"] = f"{rng.getrandbits(64):016x}"
            if rng.random() < 0.03:
                profile["timezoneJS"] = rng.choice(TIMEZONES)

    with OUT.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        writer.writerows(rows)
    print(f"wrote {len(rows)} records for 520 browsers to {OUT}")


if __name__ == "__main__":
    main()

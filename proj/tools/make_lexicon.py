#!/usr/bin/env python3
"""Regenerate data/lexicon.tsv from data/professions.txt.

Each profession maps to its rule-based plural forms plus a curated set of
synonyms. Output format: token TAB comma-separated alternates.
"""

import pathlib
import sys

SYNONYMS = {
    "accountant": ["bookkeeper", "auditor"],
    "actor": ["performer", "thespian"],
    "actress": ["performer", "actor"],
    "administrator": ["manager", "executive"],
    "advocate": ["lawyer", "attorney", "counsel"],
    "aide": ["assistant", "helper"],
    "analyst": ["psychoanalyst"],
    "architect": ["designer"],
    "artist": ["painter", "artiste"],
    "assistant": ["aide", "helper"],
    "athlete": ["sportsman", "jock"],
    "attorney": ["lawyer", "counsel", "counselor"],
    "author": ["writer", "novelist"],
    "baker": ["bread_maker"],
    "banker": ["financier"],
    "barber": ["hairdresser", "haircutter"],
    "barrister": ["lawyer", "attorney", "counsel"],
    "bartender": ["barman", "barkeeper", "mixologist"],
    "bookkeeper": ["accountant", "clerk"],
    "boss": ["chief", "foreman", "supervisor", "manager"],
    "broker": ["agent", "stockbroker"],
    "builder": ["constructor"],
    "businessman": ["entrepreneur", "businessperson"],
    "businesswoman": ["entrepreneur", "businessperson"],
    "captain": ["skipper", "commander"],
    "caretaker": ["custodian", "janitor"],
    "chef": ["cook"],
    "cleric": ["clergyman", "priest", "minister"],
    "clergyman": ["cleric", "priest", "minister", "pastor"],
    "clerk": ["secretary"],
    "coach": ["trainer", "manager"],
    "columnist": ["journalist", "writer"],
    "comedian": ["comic", "comedienne"],
    "commander": ["captain", "leader"],
    "cop": ["policeman", "officer", "patrolman"],
    "counselor": ["adviser", "advisor", "therapist"],
    "critic": ["reviewer"],
    "custodian": ["janitor", "caretaker"],
    "dentist": ["orthodontist"],
    "detective": ["investigator", "sleuth"],
    "diplomat": ["envoy", "ambassador"],
    "director": ["manager", "filmmaker"],
    "doctor": ["physician", "medic", "doc", "md"],
    "economist": ["economic_expert"],
    "editor": ["redactor"],
    "educator": ["teacher", "pedagogue"],
    "engineer": ["technologist"],
    "entrepreneur": ["businessman", "businesswoman", "enterpriser"],
    "envoy": ["ambassador", "diplomat", "emissary"],
    "executive": ["administrator", "manager"],
    "farmer": ["rancher", "grower", "husbandman"],
    "filmmaker": ["director", "moviemaker"],
    "financier": ["banker", "investor"],
    "firefighter": ["fireman"],
    "footballer": ["player"],
    "gardener": ["landscaper", "groundskeeper"],
    "guard": ["bodyguard", "sentry", "sentinel"],
    "hairdresser": ["stylist", "barber", "coiffeur"],
    "headmaster": ["principal", "schoolmaster"],
    "homemaker": ["housewife", "househusband"],
    "housekeeper": ["maid"],
    "instructor": ["teacher", "tutor"],
    "interpreter": ["translator"],
    "investigator": ["detective", "inspector"],
    "janitor": ["custodian", "caretaker"],
    "journalist": ["reporter", "correspondent", "newsman"],
    "judge": ["justice", "magistrate"],
    "laborer": ["labourer", "worker", "workman"],
    "lawmaker": ["legislator", "lawgiver"],
    "lawyer": ["attorney", "counsel", "barrister", "solicitor"],
    "lecturer": ["professor", "instructor"],
    "legislator": ["lawmaker", "lawgiver"],
    "magistrate": ["judge"],
    "maid": ["housekeeper", "maidservant"],
    "manager": ["director", "boss", "administrator"],
    "mechanic": ["machinist", "technician"],
    "medic": ["doctor", "paramedic"],
    "minister": ["pastor", "clergyman", "preacher", "secretary"],
    "musician": ["player", "instrumentalist"],
    "nanny": ["nursemaid", "governess"],
    "novelist": ["author", "writer"],
    "nurse": ["caregiver", "nursemaid"],
    "officer": ["policeman", "cop"],
    "pastor": ["minister", "preacher", "clergyman", "priest"],
    "physician": ["doctor", "medic", "md"],
    "pilot": ["aviator", "flier", "airman"],
    "poet": ["versifier", "bard"],
    "policeman": ["cop", "officer", "patrolman", "policewoman"],
    "politician": ["statesman", "pol"],
    "preacher": ["minister", "pastor", "evangelist"],
    "president": ["chairman", "chairperson", "head"],
    "priest": ["cleric", "clergyman", "pastor"],
    "principal": ["headmaster", "headmistress"],
    "professor": ["prof", "lecturer", "academic"],
    "programmer": ["coder", "developer"],
    "prosecutor": ["attorney", "lawyer"],
    "psychiatrist": ["shrink", "psychotherapist"],
    "psychologist": ["therapist"],
    "rabbi": ["cleric"],
    "receptionist": ["secretary"],
    "reporter": ["journalist", "correspondent", "newsman"],
    "sailor": ["seaman", "mariner", "seafarer"],
    "salesman": ["salesperson", "saleswoman", "seller"],
    "scholar": ["academic", "scholarly_person"],
    "scientist": ["researcher"],
    "secretary": ["clerk", "assistant"],
    "senator": ["legislator", "lawmaker"],
    "servant": ["retainer", "maid", "butler"],
    "singer": ["vocalist", "crooner"],
    "soldier": ["trooper", "warrior"],
    "solicitor": ["lawyer", "attorney"],
    "spokesman": ["spokesperson", "spokeswoman"],
    "spokeswoman": ["spokesperson", "spokesman"],
    "statesman": ["politician"],
    "steward": ["stewardess", "attendant"],
    "stockbroker": ["broker"],
    "surgeon": ["doctor", "physician"],
    "tailor": ["seamstress", "dressmaker"],
    "teacher": ["instructor", "educator", "schoolteacher", "tutor"],
    "therapist": ["counselor", "psychologist"],
    "trader": ["dealer", "merchant", "monger"],
    "trucker": ["driver", "teamster"],
    "tutor": ["teacher", "instructor"],
    "tycoon": ["magnate", "mogul"],
    "veterinarian": ["vet"],
    "vocalist": ["singer"],
    "waiter": ["server", "waitress", "waitperson"],
    "waitress": ["server", "waiter", "waitperson"],
    "worker": ["laborer", "employee", "workman"],
    "writer": ["author", "novelist"],
}

IRREGULAR = {"man": "men", "woman": "women", "person": "people"}


def plurals(token):
    for singular, plural in IRREGULAR.items():
        if token.endswith(singular):
            return [token[: -len(singular)] + plural]
    if token.endswith(("s", "sh", "ch", "x", "z")):
        return [token + "es"]
    if len(token) > 1 and token.endswith("y") and token[-2] not in "aeiou":
        return [token[:-1] + "ies"]
    return [token + "s"]


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "data"
    professions = [
        line.strip()
        for line in (root / "professions.txt").read_text().splitlines()
        if line.strip()
    ]
    rows = []
    for token in professions:
        alternates = []
        for word in [token] + plurals(token):
            if word not in alternates:
                alternates.append(word)
        for synonym in SYNONYMS.get(token, []):
            for word in [synonym] + plurals(synonym):
                if word not in alternates:
                    alternates.append(word)
        rows.append(token + "\t" + ",".join(alternates))
    (root / "lexicon.tsv").write_text("\n".join(rows) + "\n")
    print(f"wrote {len(rows)} entries", file=sys.stderr)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Regenerate src/teamrec/data/taxonomy.json.

The taxonomy is a CCS-derived subset: 13 root branches, up to four levels,
poly-hierarchical (several concepts carry two parents). Names are kept in
normalized phrase form (lowercase, no punctuation) so they compare directly
against normalized skills. Codes are stable sequential 8-digit strings
assigned in definition order; regeneration is byte-deterministic.
"""

from __future__ import annotations

import json
from pathlib import Path

# name -> children (nested dicts; leaves are empty dicts)
TREE: dict = {
    "general and reference": {
        "document types": {
            "surveys and overviews": {},
            "reference works": {},
        },
        "cross computing tools and techniques": {
            "performance": {},
            "evaluation": {},
            "measurement": {},
            "metrics": {},
            "validation": {},
            "design": {},
            "experimentation": {},
            "estimation": {},
        },
    },
    "hardware": {
        "communication hardware": {
            "signal processing systems": {
                "digital signal processing": {},
            },
            "sensors and actuators": {},
            "external storage": {},
        },
        "integrated circuits": {
            "field programmable gate arrays": {},
            "semiconductor memory": {},
        },
        "power and energy": {
            "power estimation and optimization": {},
            "energy harvesting": {},
        },
        "emerging technologies": {
            "quantum technologies": {},
            "spintronics": {},
        },
    },
    "computer systems organization": {
        "architectures": {
            "parallel architectures": {
                "multicore architectures": {},
                "single instruction multiple data": {},
            },
            "distributed architectures": {
                "cloud computing": {},
                "client server architectures": {},
                "grid computing": {},
                "peer to peer architectures": {},
            },
        },
        "embedded and cyber physical systems": {
            "embedded systems": {},
            "sensor networks": {},
            "robotics": {},
        },
        "real time systems": {
            "real time operating systems": {},
        },
        "dependable and fault tolerant systems and networks": {
            "reliability": {},
            "redundancy": {},
            "maintainability": {},
        },
    },
    "networks": {
        "network architectures": {
            "network design principles": {},
        },
        "network protocols": {
            "routing protocols": {},
            "transport protocols": {},
            "application layer protocols": {},
        },
        "network algorithms": {
            "traffic engineering algorithms": {},
            "network economics": {},
        },
        "network performance evaluation": {
            "network measurement": {},
            "network simulations": {},
        },
        "network properties": {
            "network dynamics": {},
            "network reliability": {},
        },
        "network types": {
            "ad hoc networks": {},
            "mobile networks": {},
            "data center networks": {},
            "peer to peer networks": {},
        },
    },
    "software and its engineering": {
        "software organization and properties": {
            "software system structures": {
                "software architectures": {},
                "design patterns": {},
            },
            "extra functional properties": {
                "software reliability": {},
                "software fault tolerance": {},
            },
        },
        "software notations and tools": {
            "general programming languages": {
                "functional languages": {},
                "imperative languages": {},
                "object oriented languages": {},
                "scripting languages": {},
            },
            "compilers": {
                "compiler optimization": {},
                "parsers": {},
                "runtime environments": {},
            },
            "version control": {},
            "software libraries and repositories": {},
            "development frameworks and environments": {
                "integrated development environments": {},
            },
        },
        "software creation and management": {
            "designing software": {
                "requirements analysis": {},
                "software design engineering": {},
            },
            "software development process management": {
                "agile software development": {},
                "risk management": {},
            },
            "software verification and validation": {
                "software testing": {},
                "formal software verification": {},
                "empirical software validation": {},
            },
            "software maintenance": {},
            "software evolution": {},
        },
    },
    "theory of computation": {
        "design and analysis of algorithms": {
            "approximation algorithms": {},
            "online algorithms": {},
            "streaming algorithms": {},
            "parameterized complexity": {},
            "graph algorithms analysis": {},
            "data structures": {},
        },
        "computational complexity and cryptography": {
            "complexity classes": {},
            "problems reductions and completeness": {},
        },
        "models of computation": {
            "computability": {},
            "concurrency": {},
            "quantum computation theory": {},
        },
        "formal languages and automata theory": {
            "regular languages": {},
            "grammars and context free languages": {},
            "tree languages": {},
        },
        "logic": {
            "logic and verification": {},
            "modal and temporal logics": {},
            "proof theory": {},
            "constraint and logic programming": {},
        },
        "theory and algorithms for application domains": {
            "machine learning theory": {
                "sample complexity and generalization bounds": {},
                "online learning theory": {},
            },
            "algorithmic game theory": {
                "mechanism design": {},
                "computational social choice": {},
            },
        },
    },
    "mathematics of computing": {
        "probability and statistics": {
            "probabilistic inference": {},
            "bayesian computation": {},
            "stochastic processes": {
                "markov processes": {},
                "queueing theory": {},
                "random walks": {},
            },
            "statistical paradigms": {
                "time series analysis": {},
                "regression analysis": {},
                "exploratory data analysis": {},
                "dimensionality reduction": {},
            },
            "monte carlo methods": {},
        },
        "discrete mathematics": {
            "graph theory": {
                "network flows": {},
                "graph coloring": {},
                "hypergraphs": {},
                "random graphs": {},
            },
            "combinatorics": {
                "combinatorial optimization": {},
                "enumeration": {},
                "permutations and combinations": {},
            },
        },
        "mathematical analysis": {
            "numerical analysis": {
                "interpolation": {},
                "numerical integration": {},
                "numerical linear algebra": {},
            },
            "mathematical optimization": {
                "convex optimization": {},
                "integer programming": {},
                "linear programming": {},
                "nonconvex optimization": {},
            },
        },
        "information theory": {
            "coding theory": {},
        },
    },
    "information systems": {
        "information retrieval": {
            "document representation": {
                "topic models": {},
                "content analysis": {},
            },
            "retrieval models and ranking": {
                "learning to rank": {},
                "probabilistic retrieval models": {},
            },
            "evaluation of retrieval results": {
                "relevance assessment": {},
                "test collections": {},
            },
            "retrieval tasks and goals": {
                "question answering": {},
                "recommender systems": {},
                "information extraction": {},
                "summarization": {},
                "sentiment analysis": {},
                "clustering and classification": {},
                "duplicate detection": {},
                "expert finding": {},
            },
            "search engine indexing": {},
            "users and interactive retrieval": {
                "personalization": {},
                "collaborative search": {},
                "search interfaces": {},
            },
        },
        "data management systems": {
            "database design and models": {
                "relational database model": {},
                "graph databases": {},
                "entity relationship models": {},
            },
            "query languages": {
                "structured query language": {},
            },
            "database transaction processing": {
                "database recovery": {},
                "concurrency control": {},
            },
            "information integration": {
                "entity resolution": {},
                "data cleaning": {},
                "schema matching": {},
            },
        },
        "data mining": {
            "association rules": {},
            "clustering": {},
            "nearest neighbor search": {},
            "data stream mining": {},
            "collaborative filtering": {},
            "anomaly detection": {},
        },
        "information systems applications": {
            "decision support systems": {
                "data analytics": {},
                "online analytical processing": {},
            },
        },
        "world wide web": {
            "web searching and information discovery": {
                "web search engines": {},
                "social tagging": {},
            },
            "web mining": {
                "web crawling": {},
                "social network analysis": {},
            },
            "web applications": {
                "crowdsourcing": {},
                "web services": {},
            },
        },
    },
    "security and privacy": {
        "cryptography": {
            "public key cryptography": {},
            "cryptographic hash functions": {},
            "key management": {},
            "digital signatures": {},
            "cryptanalysis": {},
        },
        "network security": {
            "firewalls": {},
            "intrusion detection systems": {},
            "web protocol security": {},
        },
        "security services": {
            "authentication": {},
            "access control": {},
            "authorization": {},
            "privacy preserving protocols": {},
        },
        "human and societal aspects of security and privacy": {
            "usable security": {},
            "privacy protections": {},
        },
        "software and application security": {
            "web application security": {},
            "software security engineering": {},
        },
        "systems security": {
            "operating systems security": {},
            "distributed systems security": {},
            "information flow control": {},
        },
    },
    "human centered computing": {
        "human computer interaction": {
            "interaction design": {
                "user interface design": {},
                "user centered design": {},
            },
            "empirical studies in hci": {},
            "hci design and evaluation methods": {
                "usability testing": {},
                "user studies": {},
                "heuristic evaluations": {},
            },
        },
        "collaborative and social computing": {
            "social computing theory": {
                "computer supported cooperative work": {},
                "social media": {},
            },
        },
        "visualization": {
            "visualization techniques": {
                "graph drawings": {},
                "scientific visualization": {},
                "information visualization": {},
            },
            "visual analytics": {},
        },
        "accessibility": {
            "accessibility technologies": {},
        },
        "ubiquitous and mobile computing": {
            "mobile devices": {},
            "ambient intelligence": {},
        },
    },
    "computing methodologies": {
        "artificial intelligence": {
            "natural language processing": {
                "information extraction ccs dup": {},  # replaced by poly edge below
                "machine translation": {},
                "speech recognition": {},
                "discourse dialogue and pragmatics": {},
                "natural language generation": {},
                "phonology and morphology": {},
                "lexical semantics": {},
            },
            "knowledge representation": {
                "description logics": {},
                "semantic networks": {},
                "nonmonotonic reasoning": {},
                "probabilistic reasoning": {},
                "ontology engineering": {},
                "logic programming": {},
                "temporal reasoning": {},
                "causal reasoning": {},
            },
            "planning and scheduling": {
                "planning for deterministic actions": {},
                "planning under uncertainty": {},
                "multi agent planning": {},
                "robotic planning": {},
            },
            "search methodologies": {
                "heuristic function construction": {},
                "discrete space search": {},
                "continuous space search": {},
                "randomized search": {},
                "game tree search": {},
            },
            "control methods": {
                "computational control theory": {},
                "robotic autonomy": {},
            },
            "distributed artificial intelligence": {
                "multi agent systems": {},
                "intelligent agents": {},
                "mobile agents": {},
                "cooperation and coordination": {},
            },
            "computer vision": {
                "image segmentation": {},
                "object recognition": {},
                "visual tracking": {},
                "scene understanding": {},
                "image representations": {},
                "activity recognition": {},
            },
        },
        "machine learning": {
            "learning paradigms": {
                "supervised learning": {},
                "unsupervised learning": {},
                "reinforcement learning": {},
                "multi task learning": {},
                "active learning": {},
            },
            "machine learning approaches": {
                "neural networks": {},
                "kernel methods": {},
                "classification and regression trees": {},
                "bayesian networks": {},
                "factorization methods": {},
                "rule learning": {},
                "instance based learning": {},
                "markov decision processes": {},
                "bio inspired approaches": {},
            },
            "machine learning algorithms": {
                "ensemble methods": {},
                "boosting": {},
                "feature selection": {},
                "spectral methods": {},
                "regularization": {},
            },
        },
        "symbolic and algebraic manipulation": {
            "computer algebra systems": {},
            "equation solving algorithms": {},
        },
        "parallel computing methodologies": {
            "parallel algorithms": {},
            "shared memory algorithms": {},
            "massively parallel algorithms": {},
        },
        "distributed computing methodologies": {
            "distributed algorithms": {},
            "self organization": {},
        },
        "modeling and simulation": {
            "simulation types and techniques": {
                "discrete event simulation": {},
                "agent based simulation": {},
            },
            "model development and analysis": {
                "modeling methodologies": {},
            },
        },
    },
    "applied computing": {
        "life and medical sciences": {
            "computational biology": {
                "genomics": {},
                "proteomics": {},
                "systems biology": {},
            },
            "health informatics": {},
            "bioinformatics": {},
        },
        "physical sciences and engineering": {
            "chemistry": {},
            "physics": {},
            "earth and atmospheric sciences": {},
            "astronomy": {},
            "computer aided design": {},
        },
        "operations research": {
            "decision analysis": {},
            "forecasting": {},
            "transportation": {},
            "industry and manufacturing": {},
        },
        "education": {
            "e learning": {},
            "computer assisted instruction": {},
            "interactive learning environments": {},
            "collaborative learning": {},
        },
        "document management and text processing": {
            "document searching": {},
            "annotation": {},
            "text editing": {},
        },
        "law social and behavioral sciences": {
            "economics": {},
            "psychology": {},
            "sociology": {},
            "anthropology": {},
        },
        "arts and humanities": {
            "media arts": {},
            "performing arts": {},
            "language translation": {},
        },
        "computers in other domains": {
            "e government": {},
            "agriculture": {},
        },
    },
    "social and professional topics": {
        "professional topics": {
            "computing education": {
                "computational thinking": {},
                "student assessment": {},
                "computing literacy": {},
            },
            "management of computing and information systems": {
                "project staffing": {},
                "project management techniques": {},
            },
        },
        "computing technology policy": {
            "intellectual property": {},
            "privacy policies": {},
        },
        "user characteristics": {
            "cultural characteristics": {},
        },
    },
}

# (child name, extra parent name): poly-hierarchy edges on top of the tree
POLY_EDGES = [
    ("probabilistic reasoning", "probability and statistics"),
    ("monte carlo methods", "simulation types and techniques"),
    ("combinatorial optimization", "design and analysis of algorithms"),
    ("sentiment analysis", "natural language processing"),
    ("information extraction", "natural language processing"),
    ("social network analysis", "social computing theory"),
    ("sensor networks", "network types"),
    ("reliability", "cross computing tools and techniques"),
    ("markov decision processes", "stochastic processes"),
    ("collaborative filtering", "users and interactive retrieval"),
]


def main() -> None:
    concepts: list[dict] = []
    code_by_name: dict[str, str] = {}
    counter = 0

    def assign(name: str) -> str:
        nonlocal counter
        counter += 1
        return f"{10000000 + counter}"

    def walk(subtree: dict, parent_name: str | None) -> None:
        for name, children in subtree.items():
            if name == "information extraction ccs dup":
                continue  # lives under retrieval tasks; linked back via POLY_EDGES
            if name in code_by_name:
                raise SystemExit(f"duplicate concept name: {name}")
            code = assign(name)
            code_by_name[name] = code
            concepts.append(
                {
                    "code": code,
                    "name": name,
                    "parents": [code_by_name[parent_name]] if parent_name else [],
                }
            )
            walk(children, name)

    walk(TREE, None)

    for child, extra_parent in POLY_EDGES:
        entry = next(c for c in concepts if c["name"] == child)
        parent_code = code_by_name[extra_parent]
        if parent_code not in entry["parents"]:
            entry["parents"].append(parent_code)

    out = Path(__file__).resolve().parent.parent / "src" / "teamrec" / "data" / "taxonomy.json"
    out.write_text(json.dumps(concepts, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    roots = sum(1 for c in concepts if not c["parents"])
    poly = sum(1 for c in concepts if len(c["parents"]) > 1)
    print(f"wrote {len(concepts)} concepts ({roots} roots, {poly} poly-parent) to {out}")


if __name__ == "__main__":
    main()

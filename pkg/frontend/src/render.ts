/** DOM builders for team cards, metric bars and empty states.
 *
 * Goodness is always the server-sent value: the card keeps the verbatim
 * number in data-goodness and only formats it for display.
 */

import type { RecommendationResponse, TeamPayload } from "./api";

const METRIC_DEFINITIONS: Record<string, string> = {
  coverage: "Fraction of the call's demanded skills held by at least one member.",
  robustness: "How many members can drop out before coverage suffers, normalized.",
  redundancy: "Fraction of demanded skills shared by two or more members (penalized).",
  "set size": "Team size relative to the normalization cap (penalized).",
};

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function metricBar(doc: Document, name: string, value: number): HTMLElement {
  const wrapper = el(doc, "div", "metric-bar");
  wrapper.title = `${name} = ${value.toFixed(4)} — ${METRIC_DEFINITIONS[name] ?? ""}`;
  const label = el(doc, "span", "metric-label", name);
  const track = el(doc, "div", "metric-track");
  const fill = el(doc, "div", "metric-fill");
  fill.style.width = `${Math.round(value * 100)}%`;
  fill.dataset.value = String(value);
  track.appendChild(fill);
  wrapper.append(label, track);
  return wrapper;
}

export function buildTeamCard(doc: Document, team: TeamPayload, rank: number): HTMLElement {
  const card = el(doc, "article", "team-card");
  card.dataset.goodness = String(team.goodness);

  const header = el(doc, "header", "team-card-header");
  header.appendChild(el(doc, "span", "team-rank", `#${rank}`));
  const score = el(doc, "span", "team-goodness", team.goodness.toFixed(4));
  score.title =
    "goodness = clamp((coverage + robustness − redundancy − set size) / 2) — " +
    `inputs: coverage ${team.metrics.coverage.toFixed(4)}, ` +
    `robustness ${team.metrics.k_robustness_norm.toFixed(4)}, ` +
    `redundancy ${team.metrics.redundancy.toFixed(4)}, ` +
    `set size ${team.metrics.set_size_norm.toFixed(4)}`;
  header.appendChild(score);
  card.appendChild(header);

  const members = el(doc, "ul", "team-members");
  for (const member of team.members) {
    const item = el(doc, "li", "team-member", member.name);
    item.dataset.id = member.id;
    members.appendChild(item);
  }
  card.appendChild(members);

  const bars = el(doc, "div", "metric-bars");
  bars.appendChild(metricBar(doc, "coverage", team.metrics.coverage));
  bars.appendChild(metricBar(doc, "robustness", team.metrics.k_robustness_norm));
  bars.appendChild(metricBar(doc, "redundancy", team.metrics.redundancy));
  bars.appendChild(metricBar(doc, "set size", team.metrics.set_size_norm));
  card.appendChild(bars);

  return card;
}

export function renderResults(
  doc: Document,
  container: HTMLElement,
  response: RecommendationResponse,
): void {
  container.textContent = "";
  const hasTeams = response.slates.some((slate) => slate.teams.length > 0);
  if (!hasTeams) {
    const empty = el(doc, "div", "empty-state");
    empty.appendChild(el(doc, "p", undefined, "No teams found."));
    empty.appendChild(
      el(
        doc,
        "p",
        "empty-hint",
        "Try another method — the taxonomy and bandit methods reach further than string matching.",
      ),
    );
    container.appendChild(empty);
    return;
  }
  for (const slate of response.slates) {
    const section = el(doc, "section", "slate");
    section.dataset.callId = slate.call.id;
    section.appendChild(el(doc, "h3", "slate-title", `${slate.call.id} — ${slate.call.title}`));
    slate.teams.forEach((team, index) => {
      section.appendChild(buildTeamCard(doc, team, index + 1));
    });
    container.appendChild(section);
  }
}

export function renderPickerEmptyState(doc: Document, list: HTMLElement): void {
  list.textContent = "";
  const item = el(doc, "li", "picker-empty", "No entries in the corpus.");
  list.appendChild(item);
}

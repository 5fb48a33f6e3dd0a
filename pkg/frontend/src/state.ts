/** Pure UI state helpers: tab state, type-ahead filtering, feedback drafts. */

import type { Method, Mode, RecommendationResponse } from "./api";

export type UseCase = "UC1" | "UC2" | "UC3";

export const MODE_BY_USE_CASE: Record<UseCase, Mode> = {
  UC1: "researcher",
  UC2: "call",
  UC3: "interest",
};

export const USE_CASE_LABELS: Record<UseCase, string> = {
  UC1: "By researcher",
  UC2: "By call",
  UC3: "By interest",
};

export const METHODS: Method[] = ["M0", "M1", "M2", "M3"];

/** One-line description per method, shown next to the selector. */
export const METHOD_DESCRIPTIONS: Record<Method, string> = {
  M0: "Random baseline: teams sampled without looking at skills.",
  M1: "String matching: interests that fuzzy-match the demanded skills.",
  M2: "Taxonomy matching: skills joined through a shared concept hierarchy.",
  M3: "Boosted bandit: learned candidate probabilities from relational features.",
};

export interface PickerOption {
  id: string;
  label: string;
}

export interface FeedbackDraft {
  relevance: number | null;
  usefulness: number | null;
  comment: string;
}

export function emptyDraft(): FeedbackDraft {
  return { relevance: null, usefulness: null, comment: "" };
}

/** Both Likert answers are required before the form may submit. */
export function draftComplete(draft: FeedbackDraft): boolean {
  return draft.relevance !== null && draft.usefulness !== null;
}

export interface TabState {
  subjectId: string | null;
  subjectQuery: string;
  method: Method;
  k: number;
  lastResponse: RecommendationResponse | null;
  draft: FeedbackDraft;
}

export function initialTabState(): TabState {
  return {
    subjectId: null,
    subjectQuery: "",
    method: "M1",
    k: 5,
    lastResponse: null,
    draft: emptyDraft(),
  };
}

/**
 * Case-insensitive type-ahead filter: prefix matches first, then substring
 * matches, both alphabetical. Matches against labels and ids.
 */
export function filterOptions(
  options: PickerOption[],
  query: string,
  limit = 8,
): PickerOption[] {
  const needle = query.trim().toLowerCase();
  if (!needle) return options.slice(0, limit);
  const prefix: PickerOption[] = [];
  const substring: PickerOption[] = [];
  for (const option of options) {
    const label = option.label.toLowerCase();
    const id = option.id.toLowerCase();
    if (label.startsWith(needle) || id.startsWith(needle)) {
      prefix.push(option);
    } else if (label.includes(needle) || id.includes(needle)) {
      substring.push(option);
    }
  }
  const byLabel = (a: PickerOption, b: PickerOption) => a.label.localeCompare(b.label);
  return [...prefix.sort(byLabel), ...substring.sort(byLabel)].slice(0, limit);
}

/** Is the form submittable? UC3 needs free text, UC1/UC2 a picked subject. */
export function canSubmit(useCase: UseCase, state: TabState): boolean {
  if (useCase === "UC3") return state.subjectQuery.trim().length > 0;
  return state.subjectId !== null;
}

export function subjectForRequest(useCase: UseCase, state: TabState): string {
  return useCase === "UC3" ? state.subjectQuery.trim() : (state.subjectId ?? "");
}

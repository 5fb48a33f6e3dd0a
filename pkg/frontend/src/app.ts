/** Wires tabs, pickers, results and the feedback form to the service API.
 *
 * The UI is stateless with respect to the engine: everything shown comes
 * from the last response; a refresh loses only unsent feedback drafts.
 */

import { ApiError, TeamRecApi } from "./api";
import type { Method } from "./api";
import type { PickerOption, TabState, UseCase } from "./state";
import {
  MODE_BY_USE_CASE,
  METHOD_DESCRIPTIONS,
  METHODS,
  canSubmit,
  draftComplete,
  emptyDraft,
  filterOptions,
  initialTabState,
  subjectForRequest,
} from "./state";
import { renderPickerEmptyState, renderResults } from "./render";

const USE_CASES: UseCase[] = ["UC1", "UC2", "UC3"];

const SUBJECT_PLACEHOLDERS: Record<UseCase, string> = {
  UC1: "Search researchers…",
  UC2: "Search calls…",
  UC3: "Enter a research interest…",
};

interface Controllers {
  inFlight: AbortController | null;
}

export function initApp(doc: Document, api: TeamRecApi): { ready: Promise<void> } {
  const $ = <T extends HTMLElement>(id: string): T => {
    const node = doc.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  };

  const banner = $<HTMLDivElement>("banner");
  const bannerMessage = $<HTMLSpanElement>("banner-message");
  const bannerAction = $<HTMLButtonElement>("banner-action");
  const subjectInput = $<HTMLInputElement>("subject-input");
  const subjectOptions = $<HTMLUListElement>("subject-options");
  const methodSelect = $<HTMLSelectElement>("method-select");
  const methodHint = $<HTMLSpanElement>("method-hint");
  const kInput = $<HTMLInputElement>("k-input");
  const goButton = $<HTMLButtonElement>("go-button");
  const results = $<HTMLElement>("results");
  const feedbackSection = $<HTMLElement>("feedback");
  const relevanceGroup = $<HTMLFieldSetElement>("relevance-group");
  const usefulnessGroup = $<HTMLFieldSetElement>("usefulness-group");
  const commentInput = $<HTMLTextAreaElement>("comment-input");
  const feedbackSubmit = $<HTMLButtonElement>("feedback-submit");
  const feedbackStatus = $<HTMLDivElement>("feedback-status");
  const toast = $<HTMLDivElement>("toast");

  const tabs = new Map<UseCase, TabState>(
    USE_CASES.map((uc) => [uc, initialTabState()]),
  );
  const controllers = new Map<UseCase, Controllers>(
    USE_CASES.map((uc) => [uc, { inFlight: null }]),
  );
  let active: UseCase = "UC1";
  let researcherOptions: PickerOption[] = [];
  let callOptions: PickerOption[] = [];
  let listingsLoaded = false;

  const activeState = (): TabState => tabs.get(active)!;

  for (const method of METHODS) {
    const option = doc.createElement("option");
    option.value = method;
    option.textContent = `${method} — ${METHOD_DESCRIPTIONS[method]}`;
    methodSelect.appendChild(option);
  }

  function showBanner(message: string, actionLabel: string | null, action: (() => void) | null) {
    bannerMessage.textContent = message;
    if (actionLabel && action) {
      bannerAction.textContent = actionLabel;
      bannerAction.hidden = false;
      bannerAction.onclick = () => {
        banner.hidden = true;
        action();
      };
    } else {
      bannerAction.hidden = true;
      bannerAction.onclick = null;
    }
    banner.hidden = false;
  }

  function showToast(message: string) {
    toast.textContent = message;
    toast.hidden = false;
    setTimeout(() => {
      toast.hidden = true;
    }, 3000);
  }

  function pickerOptionsFor(useCase: UseCase): PickerOption[] {
    return useCase === "UC1" ? researcherOptions : callOptions;
  }

  function renderOptions() {
    const state = activeState();
    subjectOptions.textContent = "";
    if (active === "UC3") {
      subjectOptions.hidden = true;
      return;
    }
    subjectOptions.hidden = false;
    const pool = pickerOptionsFor(active);
    if (listingsLoaded && pool.length === 0) {
      renderPickerEmptyState(doc, subjectOptions);
      return;
    }
    for (const option of filterOptions(pool, state.subjectQuery)) {
      const item = doc.createElement("li");
      item.className = "picker-option";
      item.textContent = option.label;
      item.dataset.id = option.id;
      item.addEventListener("click", () => {
        state.subjectId = option.id;
        state.subjectQuery = option.label;
        subjectInput.value = option.label;
        subjectOptions.textContent = "";
        updateGoButton();
      });
      subjectOptions.appendChild(item);
    }
  }

  function updateGoButton() {
    goButton.disabled = !canSubmit(active, activeState());
  }

  function updateFeedbackWidgets() {
    const draft = activeState().draft;
    for (const [group, value] of [
      [relevanceGroup, draft.relevance],
      [usefulnessGroup, draft.usefulness],
    ] as const) {
      for (const button of Array.from(group.querySelectorAll("button"))) {
        button.classList.toggle("selected", Number(button.dataset.value) === value);
      }
    }
    commentInput.value = draft.comment;
    feedbackSubmit.disabled = !draftComplete(draft);
  }

  function renderActiveTab() {
    const state = activeState();
    for (const button of Array.from(doc.querySelectorAll<HTMLButtonElement>("#tabs .tab"))) {
      button.classList.toggle("active", button.dataset.uc === active);
    }
    subjectInput.placeholder = SUBJECT_PLACEHOLDERS[active];
    subjectInput.value = state.subjectQuery;
    methodSelect.value = state.method;
    methodHint.textContent = METHOD_DESCRIPTIONS[state.method];
    kInput.value = String(state.k);
    renderOptions();
    updateGoButton();
    results.textContent = "";
    if (state.lastResponse) {
      renderResults(doc, results, state.lastResponse);
      feedbackSection.hidden = false;
      feedbackStatus.hidden = true;
      updateFeedbackWidgets();
    } else {
      feedbackSection.hidden = true;
    }
  }

  async function loadListings(): Promise<void> {
    try {
      const [researchers, calls] = await Promise.all([
        api.listResearchers(),
        api.listCalls(),
      ]);
      researcherOptions = researchers.map((r) => ({ id: r.id, label: `${r.name} (${r.id})` }));
      callOptions = calls.map((c) => ({ id: c.id, label: `${c.id} — ${c.title}` }));
      listingsLoaded = true;
      banner.hidden = true;
      renderOptions();
    } catch {
      showBanner("Cannot reach the recommendation service.", "Retry", () => {
        void loadListings();
      });
    }
  }

  async function submitRecommendation(): Promise<void> {
    const state = activeState();
    const holder = controllers.get(active)!;
    holder.inFlight?.abort();
    const controller = new AbortController();
    holder.inFlight = controller;
    goButton.classList.add("busy");
    try {
      const response = await api.recommend(
        {
          mode: MODE_BY_USE_CASE[active],
          subject: subjectForRequest(active, state),
          method: state.method,
          k: state.k,
        },
        controller.signal,
      );
      if (holder.inFlight !== controller) return; // superseded by a newer request
      state.lastResponse = response;
      state.draft = emptyDraft();
      renderResults(doc, results, response);
      feedbackSection.hidden = false;
      feedbackStatus.hidden = true;
      updateFeedbackWidgets();
    } catch (error) {
      if (holder.inFlight !== controller) return;
      if (error instanceof ApiError) {
        if (error.status === 409) {
          showBanner(
            "The bandit model is not trained yet.",
            "Switch to M2",
            () => {
              state.method = "M2";
              renderActiveTab();
            },
          );
        } else {
          results.textContent = "";
          const note = doc.createElement("div");
          note.className = "error-state";
          note.textContent = `${error.code}: ${error.message}`;
          results.appendChild(note);
        }
      } else if ((error as Error).name !== "AbortError") {
        showBanner("Cannot reach the recommendation service.", "Retry", () => {
          void submitRecommendation();
        });
      }
    } finally {
      if (holder.inFlight === controller) holder.inFlight = null;
      goButton.classList.remove("busy");
    }
  }

  async function submitFeedback(): Promise<void> {
    const state = activeState();
    if (!state.lastResponse || !draftComplete(state.draft)) return;
    feedbackSubmit.disabled = true;
    try {
      await api.submitFeedback({
        recommendation_id: state.lastResponse.recommendation_id,
        relevance: state.draft.relevance!,
        usefulness: state.draft.usefulness!,
        comment: state.draft.comment,
      });
      state.draft = emptyDraft();
      updateFeedbackWidgets();
      feedbackStatus.hidden = true;
      showToast("Feedback recorded — thank you!");
    } catch (error) {
      // the draft stays intact so the user can retry
      feedbackStatus.textContent =
        error instanceof ApiError
          ? `${error.code}: ${error.message}`
          : "Network problem — your answers were kept, try again.";
      feedbackStatus.hidden = false;
      feedbackSubmit.disabled = !draftComplete(state.draft);
    }
  }

  for (const button of Array.from(doc.querySelectorAll<HTMLButtonElement>("#tabs .tab"))) {
    button.addEventListener("click", () => {
      active = button.dataset.uc as UseCase;
      renderActiveTab();
    });
  }

  subjectInput.addEventListener("input", () => {
    const state = activeState();
    state.subjectQuery = subjectInput.value;
    if (active !== "UC3") state.subjectId = null;
    renderOptions();
    updateGoButton();
  });

  methodSelect.addEventListener("change", () => {
    const state = activeState();
    state.method = methodSelect.value as Method;
    methodHint.textContent = METHOD_DESCRIPTIONS[state.method];
  });

  kInput.addEventListener("change", () => {
    const parsed = Number.parseInt(kInput.value, 10);
    const clamped = Number.isNaN(parsed) ? 5 : Math.min(50, Math.max(1, parsed));
    activeState().k = clamped;
    kInput.value = String(clamped);
  });

  goButton.addEventListener("click", () => {
    void submitRecommendation();
  });

  for (const group of [relevanceGroup, usefulnessGroup]) {
    group.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      if (target.tagName !== "BUTTON") return;
      const value = Number(target.dataset.value);
      const draft = activeState().draft;
      if (group === relevanceGroup) draft.relevance = value;
      else draft.usefulness = value;
      updateFeedbackWidgets();
    });
  }

  commentInput.addEventListener("input", () => {
    activeState().draft.comment = commentInput.value;
  });

  feedbackSubmit.addEventListener("click", () => {
    void submitFeedback();
  });

  renderActiveTab();
  return { ready: loadListings() };
}

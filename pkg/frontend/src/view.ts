/**
 * DOM rendering. Everything is rebuilt from controller state after each
 * change; the corpus sizes involved make diffing pointless.
 */

import type { WorkbenchController } from "./controller.js";
import {
  groupIsUntagged,
  highlightSegments,
  type GroupView,
  type MemberView,
} from "./model.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderSentence(member: MemberView): HTMLElement {
  const line = el("p", "sentence");
  for (const seg of highlightSegments(
    member.text,
    member.prepSpan,
    member.feSpan,
  )) {
    if (seg.kind === "plain") {
      line.append(seg.text);
    } else {
      const mark = el("span", seg.kind === "prep" ? "hl-prep" : "hl-fe");
      mark.textContent = seg.text;
      line.append(mark);
    }
  }
  const meta = el(
    "span",
    "member-meta",
    ` [${member.sentenceId} · ${member.subcorpus}]`,
  );
  line.append(meta);
  if (member.tags !== null) {
    line.append(el("span", "member-tags", ` ${member.tags.join(", ")}`));
  }
  return line;
}

function renderGroup(
  group: GroupView,
  index: number,
  controller: WorkbenchController,
): HTMLElement {
  const card = el("section", "group");
  if (groupIsUntagged(group)) card.classList.add("untagged");
  if (index === controller.focusedGroup) card.classList.add("focused");
  card.append(
    el(
      "h3",
      "group-title",
      `${group.frame} / ${group.frameElement} / ${group.lexicalUnit}` +
        ` (${group.members.length})`,
    ),
  );
  for (const member of group.members) card.append(renderSentence(member));
  card.addEventListener("click", () => {
    controller.focusedGroup = index;
    render(controller);
  });
  return card;
}

function renderPalette(controller: WorkbenchController): HTMLElement {
  const box = el("aside", "palette");
  box.append(el("h3", undefined, `senses for ${controller.prep}`));
  const list = el("ol", "palette-list");
  controller.palette.forEach((entry, i) => {
    const item = el("li", "palette-entry");
    if (controller.selection.has(entry.key)) item.classList.add("selected");
    const shortcut = i < 9 ? `${i + 1}` : i === 9 ? "0" : " ";
    item.append(el("kbd", undefined, shortcut));
    item.append(el("b", undefined, ` ${entry.key} `));
    item.append(el("span", undefined, entry.relationName));
    const props = [entry.complementProperties, entry.attachmentProperties]
      .filter((p) => p !== "")
      .join(" | ");
    if (props) item.append(el("small", "palette-props", ` ${props}`));
    item.addEventListener("click", () => {
      controller.toggleSense(entry.key);
      render(controller);
    });
    list.append(item);
  });
  box.append(list);
  return box;
}

function renderStatusBar(controller: WorkbenchController): HTMLElement {
  const bar = el("div", "status-bar");
  const progress = controller.progress;
  if (progress !== null) {
    bar.append(
      el(
        "span",
        "progress",
        `${progress.tagged}/${progress.total} tagged · v${controller.version}`,
      ),
    );
  }
  if (controller.status === "stale" && controller.pending !== null) {
    const warn = el(
      "span",
      "stale-warning",
      "someone else saved first; review the refreshed tags, then ",
    );
    const again = el("button", undefined, "re-apply");
    again.addEventListener("click", () => {
      void controller.reapply().then(() => render(controller));
    });
    const drop = el("button", undefined, "discard");
    drop.addEventListener("click", () => {
      controller.discardPending();
      render(controller);
    });
    warn.append(again, drop);
    bar.append(warn);
  }
  if (controller.status === "error") {
    const err = el("span", "error-text", controller.lastError ?? "failed");
    const retry = el("button", undefined, "retry");
    retry.addEventListener("click", () => {
      void controller.retry().then(() => render(controller));
    });
    err.append(" ", retry);
    bar.append(err);
  }
  return bar;
}

export function render(controller: WorkbenchController): void {
  const root = document.getElementById("app");
  if (root === null) return;
  root.replaceChildren();
  root.append(renderStatusBar(controller));
  const main = el("div", "columns");
  const groups = el("div", "groups");
  if (controller.emptyState) {
    groups.append(
      el("p", "empty-state", "no instances in this project yet"),
    );
  }
  controller.groups.forEach((group, i) => {
    groups.append(renderGroup(group, i, controller));
  });
  main.append(groups, renderPalette(controller));
  root.append(main);
}

export function wireKeyboard(controller: WorkbenchController): void {
  document.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLInputElement) return;
    if (controller.handleKey(event.key)) {
      event.preventDefault();
      render(controller);
    }
  });
}

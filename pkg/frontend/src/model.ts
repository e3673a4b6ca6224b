/**
 * Client-side view models. These hold what the service sent, plus the
 * little bit of presentation math (highlight segmentation, keyboard
 * mapping) that has no server-side counterpart. Anything the service
 * can answer (progress counts, pair tables, sense ordering) is never
 * recomputed here.
 */

import type { GroupDto, GroupMemberDto, SenseDto } from "./api.js";

export interface MemberView {
  instanceId: string;
  sentenceId: string;
  subcorpus: string;
  text: string;
  prepSpan: [number, number];
  feSpan: [number, number] | null;
  tags: string[] | null;
  tagger: string | null;
  note: string | null;
}

export interface GroupView {
  frame: string;
  frameElement: string;
  lexicalUnit: string;
  members: MemberView[];
}

export class ViewDataError extends Error {}

function checkSpan(
  span: [number, number],
  textLength: number,
  what: string,
  id: string,
): void {
  const [start, end] = span;
  if (start < 0 || end > textLength || start >= end) {
    throw new ViewDataError(
      `${what} highlight [${start}, ${end}) out of bounds for ${id}`,
    );
  }
}

function memberView(dto: GroupMemberDto): MemberView {
  // A member without sentence text cannot be rendered or tagged sensibly;
  // the service only omits text when the corpus and tag file disagree.
  if (dto.text === null || dto.prep_span === null) {
    throw new ViewDataError(`member ${dto.instance_id} has no sentence text`);
  }
  checkSpan(dto.prep_span, dto.text.length, "preposition", dto.instance_id);
  if (dto.fe_span !== null) {
    checkSpan(dto.fe_span, dto.text.length, "frame element", dto.instance_id);
  }
  return {
    instanceId: dto.instance_id,
    sentenceId: dto.sentence_id,
    subcorpus: dto.subcorpus,
    text: dto.text,
    prepSpan: dto.prep_span,
    feSpan: dto.fe_span,
    tags: dto.tags,
    tagger: dto.tagger,
    note: dto.note,
  };
}

export function groupView(dto: GroupDto): GroupView {
  return {
    frame: dto.frame,
    frameElement: dto.frame_element,
    lexicalUnit: dto.lexical_unit,
    members: dto.members.map(memberView),
  };
}

export function groupIsUntagged(group: GroupView): boolean {
  return group.members.every((m) => m.tags === null);
}

export type SegmentKind = "plain" | "fe" | "prep";

export interface Segment {
  text: string;
  kind: SegmentKind;
}

/**
 * Split sentence text into contiguous highlight segments. The
 * preposition token wins where it overlaps the frame-element span,
 * which it normally sits inside.
 */
export function highlightSegments(
  text: string,
  prepSpan: [number, number],
  feSpan: [number, number] | null,
): Segment[] {
  const kindAt = (i: number): SegmentKind => {
    if (i >= prepSpan[0] && i < prepSpan[1]) return "prep";
    if (feSpan && i >= feSpan[0] && i < feSpan[1]) return "fe";
    return "plain";
  };
  const segments: Segment[] = [];
  let start = 0;
  for (let i = 1; i <= text.length; i += 1) {
    if (i === text.length || kindAt(i) !== kindAt(start)) {
      segments.push({ text: text.slice(start, i), kind: kindAt(start) });
      start = i;
    }
  }
  return segments;
}

/** Palette rows keep exactly the order the inventory was served in. */
export interface PaletteEntry {
  key: string;
  odeKey: string;
  isCore: boolean;
  relationName: string;
  complementProperties: string;
  attachmentProperties: string;
}

export function buildPalette(senses: SenseDto[]): PaletteEntry[] {
  return senses.map((s) => ({
    key: s.key,
    odeKey: s.ode_key,
    isCore: s.is_core,
    relationName: s.relation_name,
    complementProperties: s.complement_properties,
    attachmentProperties: s.attachment_properties,
  }));
}

/** Only core senses may take new subsenses; the UI greys out the rest. */
export function canAddSubsense(entry: PaletteEntry): boolean {
  return entry.isCore;
}

export type KeyAction =
  | { type: "select"; index: number }
  | { type: "commit" }
  | { type: "clear" }
  | null;

/**
 * Keyboard-first tagging: digits toggle the first ten palette rows
 * (1..9 then 0), Enter commits the group, Escape drops the selection.
 */
export function keyAction(key: string): KeyAction {
  if (key >= "1" && key <= "9") {
    return { type: "select", index: key.charCodeAt(0) - "1".charCodeAt(0) };
  }
  if (key === "0") return { type: "select", index: 9 };
  if (key === "Enter") return { type: "commit" };
  if (key === "Escape") return { type: "clear" };
  return null;
}

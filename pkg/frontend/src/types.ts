/** Shared domain types for the extension. */

export interface EndorsementMetadata {
  dateTime: string;
  city: string;
  region: string;
  country: string;
  creator: string;
  headline: string;
  description: string;
}

export interface SidecarDocument {
  metadata: EndorsementMetadata;
  digestHex: string;
  signatureB64: string;
  certificateB64: string;
}

/** Mirrors the verifier CLI's status values so verdicts are comparable. */
export type VerifyStatus =
  | "Verified"
  | "FailedDigestMismatch"
  | "FailedSignatureInvalid"
  | "UntrustedEndorser"
  | "MalformedSidecar";

export interface VerifyOutcome {
  status: VerifyStatus;
  endorserName: string | null;
  metadata: EndorsementMetadata | null;
  detail: string;
}

export type BadgeStatus = "verified" | "failed" | "pending";

export interface BadgeState {
  status: BadgeStatus;
  endorserName: string | null;
  metadata: EndorsementMetadata | null;
  detail: string;
}
